#include "ens/io.hpp"

#include "ens/errors.hpp"

#include <fmt/format.h>
#include <fstream>
#include <sstream>

namespace ens::io {

std::vector<double> levels_from_json(const json& j) {
    if (!j.is_array()) throw ConfigError("levels must be a JSON array of numbers");
    std::vector<double> out;
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError("levels must be a JSON array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

PureState state_from_json(const json& j, Normalize mode) {
    if (!j.is_array()) throw ConfigError("state must be a JSON array");
    std::vector<PureState::Amplitude> amps;
    for (const auto& v : j) {
        if (v.is_number()) {
            amps.emplace_back(v.get<double>(), 0.0);
        } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
            amps.emplace_back(v[0].get<double>(), v[1].get<double>());
        } else {
            throw ConfigError("amplitudes must be numbers or [re, im] pairs");
        }
    }
    return PureState::make(std::move(amps), mode);
}

std::vector<double> parse_level_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ConfigError("not a number in level list: '" + item + "'");
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos)
            throw ConfigError("not a number in level list: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("empty level list");
    return out;
}

json to_json(const SamplerSettings& s) {
    return {{"seed", s.seed},         {"chains", s.chains},   {"burn_in", s.burn_in},
            {"samples", s.samples},   {"thinning", s.thinning}, {"batches", s.batches},
            {"kernel", std::string(to_string(s.kernel))}};
}

SamplerSettings sampler_from_json(const json& j, SamplerSettings s) {
    if (!j.is_object()) throw ConfigError("sampler must be a JSON object");
    s.seed = j.value("seed", s.seed);
    s.chains = j.value("chains", s.chains);
    s.burn_in = j.value("burn_in", s.burn_in);
    s.samples = j.value("samples", s.samples);
    s.thinning = j.value("thinning", s.thinning);
    s.batches = j.value("batches", s.batches);
    if (j.contains("kernel")) s.kernel = parse_kernel(j.at("kernel").get<std::string>());
    s.validate();
    return s;
}

json to_json(const EnsembleSpec& spec) {
    return {{"levels", spec.spectrum.user_levels()},
            {"energy", spec.energy},
            {"measure", std::string(to_string(spec.measure))},
            {"sampler", to_json(spec.sampler)}};
}

EnsembleSpec spec_from_json(const json& j) {
    try {
        if (!j.is_object()) throw ConfigError("ensemble spec must be a JSON object");
        EnsembleSpec spec{Spectrum(levels_from_json(j.at("levels"))), j.at("energy").get<double>()};
        if (j.contains("measure")) spec.measure = parse_measure(j.at("measure").get<std::string>());
        if (j.contains("sampler")) spec.sampler = sampler_from_json(j.at("sampler"));
        return spec;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed ensemble spec: ") + e.what());
    }
}

json to_json(const EnsembleAverage& avg, const Spectrum& s) {
    json j{{"method", std::string(to_string(avg.method))},
           {"mean_probs", s.to_user_order(avg.mean_probs.probs())},
           {"std_error", s.to_user_order(avg.std_error)},
           {"mean_energy", total_energy(avg.mean_probs, s)},
           {"sample_count", avg.sample_count},
           {"acceptance_rate", avg.acceptance_rate},
           {"chains_disagree", avg.chains_disagree}};
    if (!avg.chain_means.empty()) {
        json chains = json::array();
        for (const auto& c : avg.chain_means) chains.push_back(s.to_user_order(c));
        j["chain_means"] = std::move(chains);
    }
    return j;
}

json to_json(const CanonicalSolution& sol, const Spectrum& s) {
    json j{{"beta", sol.beta},
           {"z", sol.z},
           {"probs", s.to_user_order(sol.probs.probs())},
           {"energy_residual", sol.energy_residual}};
    j["free_energy"] = sol.free_energy ? json(*sol.free_energy) : json(nullptr);
    return j;
}

json to_json(const ComparisonReport& r) {
    const Spectrum& s = r.spectrum;
    json excluded = json::array();
    for (std::size_t m : r.excluded) excluded.push_back(s.order()[m]);
    return {{"levels", s.user_levels()},
            {"energy", r.energy},
            {"micro", to_json(r.micro, s)},
            {"canon", to_json(r.canon, s)},
            {"per_component_rel", s.to_user_order(r.per_component_rel)},
            {"max_rel_diff", r.max_rel_diff},
            {"max_rel_level", s.order()[r.max_rel_index]},
            {"max_rel_std_error", r.max_rel_std_error},
            {"l1_diff", r.l1_diff},
            {"excluded", excluded}};
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
}

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

std::string sweep_csv(const std::vector<ComparisonReport>& reports) {
    std::string out = "N,max_rel_diff,l1_diff,beta,stderr_max\n";
    for (const auto& r : reports)
        out += fmt::format("{},{},{},{},{}\n", r.spectrum.size(), format_real(r.max_rel_diff),
                           format_real(r.l1_diff), format_real(r.canon.beta),
                           format_real(r.micro.max_std_error()));
    return out;
}

void write_sample_header(std::ostream& os, std::size_t n) {
    for (std::size_t m = 0; m < n; ++m) os << (m ? "," : "") << "p_" << m + 1;
    os << '\n';
}

void write_sample_row(std::ostream& os, const std::vector<double>& p) {
    for (std::size_t m = 0; m < p.size(); ++m) os << (m ? "," : "") << format_real(p[m]);
    os << '\n';
}

} // namespace ens::io
