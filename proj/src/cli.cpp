#include "ens/cli.hpp"

#include "ens/errors.hpp"
#include "ens/io.hpp"
#include "ens/sampler.hpp"

#include "CLI11.hpp"

#include <array>
#include <cmath>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace ens::cli {

namespace {

using io::json;

struct Globals {
    std::string json_path;
    std::string csv_path;
    std::uint64_t seed = 42;
    bool quiet = false;
    CLI::Option* seed_opt = nullptr;
};

struct SamplerFlags {
    SamplerSettings settings;
    std::string kernel = "hit-and-run";
    std::vector<CLI::Option*> opts;
    CLI::Option* kernel_opt = nullptr;

    void attach(CLI::App& app) {
        opts.push_back(app.add_option("--chains", settings.chains, "independent chains")->capture_default_str());
        opts.push_back(app.add_option("--burn-in", settings.burn_in, "burn-in transitions per chain")->capture_default_str());
        opts.push_back(app.add_option("--samples", settings.samples, "retained samples per chain")->capture_default_str());
        opts.push_back(app.add_option("--thin", settings.thinning, "transitions between retained samples")->capture_default_str());
        opts.push_back(app.add_option("--batches", settings.batches, "batch-means batches per chain")->capture_default_str());
        kernel_opt = app.add_option("--kernel", kernel, "hit-and-run | random-walk")->capture_default_str();
    }

    // Explicit flags override values coming from a config file.
    SamplerSettings resolve(SamplerSettings base, const Globals& g) const {
        const SamplerSettings& f = settings;
        if (opts[0]->count()) base.chains = f.chains;
        if (opts[1]->count()) base.burn_in = f.burn_in;
        if (opts[2]->count()) base.samples = f.samples;
        if (opts[3]->count()) base.thinning = f.thinning;
        if (opts[4]->count()) base.batches = f.batches;
        if (kernel_opt->count()) base.kernel = parse_kernel(kernel);
        if (g.seed_opt->count()) base.seed = g.seed;
        base.validate();
        return base;
    }

    SamplerSettings resolve(const Globals& g) const {
        SamplerSettings base = settings;
        base.kernel = parse_kernel(kernel);
        base.seed = g.seed;
        base.validate();
        return base;
    }
};

std::string human(double x) { return fmt::format("{:.6g}", x); }

void emit(const Globals& g, const json& j, const std::string& csv) {
    if (!g.json_path.empty()) io::write_text_file(g.json_path, j.dump(2) + "\n");
    if (!g.csv_path.empty()) io::write_text_file(g.csv_path, csv);
}

json envelope(const std::string& command, json config) {
    return {{"schema", io::kSchemaVersion}, {"command", command}, {"config", std::move(config)}};
}

// ---------------------------------------------------------------- reproduce

struct Row {
    std::string label;
    std::string quantity;
    double reference;
    double computed;
    double tolerance;
    bool upper_bound; // pass iff computed <= reference * scale instead of |diff| <= tol
    bool pass = false;
};

struct WorkedCase {
    double energy;
    std::array<double, 3> micro;
    double beta;
    std::array<double, 3> canon;
};

constexpr std::array<WorkedCase, 2> kWorkedCases{{
    {2.0, {0.674, 0.204, 0.123}, 0.223, {0.669, 0.2192, 0.1122}},
    {3.0, {0.508, 0.3111, 0.1805}, 0.1199, {0.5175, 0.2842, 0.1983}},
}};
constexpr double kMicroTol = 0.001, kBetaTol = 0.002, kCanonTol = 0.003, kMaxRelDiff = 0.10;

int reproduce(const Globals& g, double tol_scale, std::ostream& out) {
    const Spectrum s({0.0, 5.0, 8.0});
    std::vector<Row> rows;
    for (const auto& pc : kWorkedCases) {
        const std::string label = fmt::format("E={}", pc.energy);
        const EnsembleSpec spec{s, pc.energy};
        const auto report = compare(spec);
        for (std::size_t m = 0; m < 3; ++m)
            rows.push_back({label, fmt::format("micro p_{}", m + 1), pc.micro[m],
                            report.micro.mean_probs[m], kMicroTol * tol_scale, false});
        rows.push_back({label, "beta", pc.beta, report.canon.beta, kBetaTol * tol_scale, false});
        for (std::size_t m = 0; m < 3; ++m)
            rows.push_back({label, fmt::format("canon p_{}", m + 1), pc.canon[m],
                            report.canon.probs[m], kCanonTol * tol_scale, false});
        rows.push_back({label, "max_rel_diff", kMaxRelDiff, report.max_rel_diff,
                        kMaxRelDiff * tol_scale, true});
    }

    bool all = true;
    json jrows = json::array();
    for (auto& r : rows) {
        r.pass = r.upper_bound ? r.computed <= r.tolerance
                               : std::abs(r.computed - r.reference) <= r.tolerance;
        all = all && r.pass;
        jrows.push_back({{"case", r.label}, {"quantity", r.quantity}, {"reference", r.reference},
                         {"computed", r.computed}, {"tolerance", r.tolerance},
                         {"kind", r.upper_bound ? "upper_bound" : "abs_diff"}, {"pass", r.pass}});
    }

    if (!g.quiet) {
        out << "spectrum 0,5,8  tolerance_scale " << human(tol_scale) << "\n";
        fmt::print(out, "{:<6} {:<13} {:>10} {:>12} {:>10}  {}\n", "case", "quantity", "reference",
                   "computed", "tol", "status");
        for (const auto& r : rows)
            fmt::print(out, "{:<6} {:<13} {:>10} {:>12} {:>10}  {}\n", r.label, r.quantity,
                       (r.upper_bound ? "<=" : "") + human(r.reference), human(r.computed),
                       human(r.tolerance), r.pass ? "PASS" : "FAIL");
        out << (all ? "all values within tolerance\n" : "tolerance failure\n");
    }

    json j = envelope("reproduce", {{"levels", {0.0, 5.0, 8.0}}, {"tolerance_scale", tol_scale}});
    j["rows"] = std::move(jrows);
    j["all_pass"] = all;
    std::string csv = "case,quantity,reference,computed,tolerance,pass\n";
    for (const auto& r : rows)
        csv += fmt::format("{},{},{},{},{},{}\n", r.label, r.quantity, io::format_real(r.reference),
                           io::format_real(r.computed), io::format_real(r.tolerance),
                           r.pass ? 1 : 0);
    emit(g, j, csv);
    return all ? kSuccess : kDomainFailure;
}

// ------------------------------------------------------------ spectrum input

struct SpectrumFlags {
    std::string levels;
    std::string spec_file;
    double energy = std::nan("");
    std::string measure = "amplitude";
    CLI::Option* levels_opt = nullptr;
    CLI::Option* energy_opt = nullptr;
    CLI::Option* measure_opt = nullptr;

    void attach(CLI::App& app, bool with_measure) {
        levels_opt = app.add_option("-s,--spectrum", levels, "comma-separated energy levels");
        app.add_option("--spec-file", spec_file, "ensemble spec JSON (levels, energy, measure, sampler)");
        energy_opt = app.add_option("-e,--energy", energy, "total energy");
        if (with_measure)
            measure_opt = app.add_option("--measure", measure, "amplitude | probability")->capture_default_str();
    }

    EnsembleSpec resolve(const SamplerFlags& sf, const Globals& g) const {
        if (!spec_file.empty()) {
            EnsembleSpec spec = io::spec_from_json(io::read_json_file(spec_file));
            if (levels_opt->count()) spec.spectrum = Spectrum(io::parse_level_list(levels));
            if (energy_opt->count()) spec.energy = energy;
            if (measure_opt && measure_opt->count()) spec.measure = parse_measure(measure);
            spec.sampler = sf.resolve(spec.sampler, g);
            return spec;
        }
        if (!levels_opt->count()) throw ConfigError("a spectrum is required (-s or --spec-file)");
        if (!energy_opt->count()) throw ConfigError("an energy is required (-e)");
        return EnsembleSpec{Spectrum(io::parse_level_list(levels)), energy,
                            parse_measure(measure), sf.resolve(g)};
    }
};

void print_levels_header(std::ostream& out, const std::string& cols) {
    out << fmt::format("{:<6} {:>12} ", "level", "energy") << cols << "\n";
}

// ------------------------------------------------------------------ average

int average(const Globals& g, const EnsembleSpec& spec, const std::string& method,
            std::size_t resolution, const std::string& dump, std::ostream& out) {
    EnsembleAverage avg = [&] {
        if (method == "auto") return microcanonical_average(spec);
        if (method == "analytic3") return analytic_average_3(spec);
        if (method == "grid") return grid_average_oracle(spec, resolution);
        if (method == "mcmc") return mcmc_average(spec);
        throw ConfigError("unknown method '" + method + "' (auto|analytic3|grid|mcmc)");
    }();

    if (!dump.empty()) {
        std::ofstream os(dump, std::ios::binary);
        if (!os) throw ConfigError("cannot write " + dump);
        io::write_sample_header(os, spec.spectrum.size());
        std::vector<double> p(spec.spectrum.size());
        for (std::size_t c = 0; c < spec.sampler.chains; ++c) {
            auto chain = sample_manifold(spec, c);
            for (std::size_t k = 0; k < spec.sampler.samples; ++k) {
                chain.next(p);
                io::write_sample_row(os, spec.spectrum.to_user_order(p));
            }
        }
    }

    json config = io::to_json(spec);
    config["method"] = method;
    if (method == "grid") config["resolution"] = resolution;

    const Spectrum& s = spec.spectrum;
    const auto mean = s.to_user_order(avg.mean_probs.probs());
    const auto se = s.to_user_order(avg.std_error);
    const auto levels = s.user_levels();
    if (!g.quiet) {
        out << "config " << config.dump() << "\n";
        out << "method " << to_string(avg.method) << "\n";
        print_levels_header(out, fmt::format("{:>12} {:>12}", "mean", "stderr"));
        for (std::size_t m = 0; m < levels.size(); ++m)
            fmt::print(out, "{:<6} {:>12} {:>12} {:>12}\n", m + 1, human(levels[m]),
                       human(mean[m]), human(se[m]));
        if (avg.chains_disagree) out << "warning: chain means disagree beyond 5x stderr\n";
    }

    json j = envelope("average", config);
    j["result"] = io::to_json(avg, s);
    std::string csv = "level,energy,mean,std_error\n";
    for (std::size_t m = 0; m < levels.size(); ++m)
        csv += fmt::format("{},{},{},{}\n", m + 1, io::format_real(levels[m]),
                           io::format_real(mean[m]), io::format_real(se[m]));
    emit(g, j, csv);
    return kSuccess;
}

// --------------------------------------------------------------------- beta

int beta(const Globals& g, const Spectrum& s, double energy, std::ostream& out) {
    const auto sol = solve_beta(s, energy);
    const auto probs = s.to_user_order(sol.probs.probs());
    const auto levels = s.user_levels();
    json config{{"levels", levels}, {"energy", energy}};
    if (!g.quiet) {
        out << "config " << config.dump() << "\n";
        fmt::print(out, "beta {}\nZ {}\nfree_energy {}\n", human(sol.beta), human(sol.z),
                   sol.free_energy ? human(*sol.free_energy) : std::string("undefined"));
        print_levels_header(out, fmt::format("{:>12}", "prob"));
        for (std::size_t m = 0; m < levels.size(); ++m)
            fmt::print(out, "{:<6} {:>12} {:>12}\n", m + 1, human(levels[m]), human(probs[m]));
    }
    json j = envelope("beta", config);
    j["result"] = io::to_json(sol, s);
    std::string csv = "level,energy,prob\n";
    for (std::size_t m = 0; m < levels.size(); ++m)
        csv += fmt::format("{},{},{}\n", m + 1, io::format_real(levels[m]),
                           io::format_real(probs[m]));
    emit(g, j, csv);
    return kSuccess;
}

// ------------------------------------------------------------------ compare

int compare_cmd(const Globals& g, const EnsembleSpec& spec, std::ostream& out) {
    const auto r = compare(spec);
    const Spectrum& s = spec.spectrum;
    const auto levels = s.user_levels();
    const auto micro = s.to_user_order(r.micro.mean_probs.probs());
    const auto se = s.to_user_order(r.micro.std_error);
    const auto canon = s.to_user_order(r.canon.probs.probs());
    const auto rel = s.to_user_order(r.per_component_rel);
    json config = io::to_json(spec);
    if (!g.quiet) {
        out << "config " << config.dump() << "\n";
        out << "method " << to_string(r.micro.method) << "\n";
        print_levels_header(out, fmt::format("{:>12} {:>12} {:>12} {:>12}", "micro", "stderr",
                                             "canon", "rel_diff"));
        for (std::size_t m = 0; m < levels.size(); ++m)
            fmt::print(out, "{:<6} {:>12} {:>12} {:>12} {:>12} {:>12}\n", m + 1,
                       human(levels[m]), human(micro[m]), human(se[m]), human(canon[m]),
                       human(rel[m]));
        fmt::print(out, "beta {}\nmax_rel_diff {}\nl1_diff {}\n", human(r.canon.beta),
                   human(r.max_rel_diff), human(r.l1_diff));
    }
    json j = envelope("compare", config);
    j["result"] = io::to_json(r);
    std::string csv = "level,energy,micro,std_error,canon,rel_diff\n";
    for (std::size_t m = 0; m < levels.size(); ++m)
        csv += fmt::format("{},{},{},{},{},{}\n", m + 1, io::format_real(levels[m]),
                           io::format_real(micro[m]), io::format_real(se[m]),
                           io::format_real(canon[m]), io::format_real(rel[m]));
    emit(g, j, csv);
    return kSuccess;
}

// -------------------------------------------------------------------- sweep

struct SweepFlags {
    std::string config;
    std::string family = "ladder";
    std::vector<std::size_t> n_values{3, 4, 6, 8};
    double fraction = 0.3;
    std::string measure = "amplitude";
    CLI::Option *family_opt = nullptr, *n_opt = nullptr, *fraction_opt = nullptr,
                *measure_opt = nullptr;

    void attach(CLI::App& app) {
        app.add_option("--config", config, "sweep config JSON (family, n_values, energy_fraction, measure, sampler)");
        family_opt = app.add_option("--family", family, "ladder | geometric | custom")->capture_default_str();
        n_opt = app.add_option("--n", n_values, "level counts")->delimiter(',')->capture_default_str();
        fraction_opt = app.add_option("--fraction", fraction, "E = E_min + fraction (E_max - E_min)")->capture_default_str();
        measure_opt = app.add_option("--measure", measure, "amplitude | probability")->capture_default_str();
    }
};

int sweep(const Globals& g, const SweepFlags& f, const SamplerFlags& sf, std::ostream& out) {
    SpectrumFamily family;
    std::vector<std::size_t> n_values = f.n_values;
    EnergyRule rule{f.fraction};
    SweepSettings settings;

    if (!f.config.empty()) {
        const json c = io::read_json_file(f.config);
        try {
            family = SpectrumFamily::parse(c.value("family", std::string("ladder")));
            if (c.contains("custom"))
                for (const auto& levels : c.at("custom"))
                    family.custom.push_back(io::levels_from_json(levels));
            if (c.contains("n_values")) n_values = c.at("n_values").get<std::vector<std::size_t>>();
            rule.fraction = c.value("energy_fraction", rule.fraction);
            settings.measure = parse_measure(c.value("measure", std::string("amplitude")));
            settings.sampler = sf.resolve(
                c.contains("sampler") ? io::sampler_from_json(c.at("sampler")) : SamplerSettings{}, g);
        } catch (const json::exception& e) {
            throw ConfigError(f.config + ": " + e.what());
        }
        if (f.family_opt->count()) family = SpectrumFamily::parse(f.family);
        if (f.n_opt->count()) n_values = f.n_values;
        if (f.fraction_opt->count()) rule.fraction = f.fraction;
        if (f.measure_opt->count()) settings.measure = parse_measure(f.measure);
    } else {
        family = SpectrumFamily::parse(f.family);
        settings.measure = parse_measure(f.measure);
        settings.sampler = sf.resolve(g);
    }
    if (n_values.empty()) throw ConfigError("sweep needs at least one N");

    const auto reports = convergence_sweep(family, n_values, rule, settings);

    json config{{"family", family.name()},
                {"n_values", n_values},
                {"energy_fraction", rule.fraction},
                {"measure", std::string(to_string(settings.measure))},
                {"sampler", io::to_json(settings.sampler)}};
    if (family.kind == SpectrumFamily::Kind::Custom) config["custom"] = family.custom;

    const std::string csv = io::sweep_csv(reports);
    if (!g.quiet) out << csv;
    json j = envelope("sweep", config);
    json rs = json::array();
    for (const auto& r : reports) rs.push_back(io::to_json(r));
    j["reports"] = std::move(rs);
    emit(g, j, csv);
    return kSuccess;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Microcanonical vs canonical occupation probabilities"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--json", g.json_path, "write structured results to this path");
    app.add_option("--csv", g.csv_path, "write tabular results to this path");
    g.seed_opt = app.add_option("--seed", g.seed, "sampler seed")->capture_default_str();
    app.add_flag("--quiet", g.quiet, "suppress the human-readable table");

    auto* rep = app.add_subcommand("reproduce", "recompute the three-level worked cases");
    double tol_scale = 1.0;
    rep->add_option("--tolerance-scale", tol_scale, "multiply every tolerance")->capture_default_str();

    auto* avg = app.add_subcommand("average", "microcanonical ensemble average");
    SpectrumFlags avg_spec;
    SamplerFlags avg_sampler;
    std::string method = "auto";
    std::size_t resolution = 1000;
    std::string dump;
    avg_spec.attach(*avg, true);
    avg_sampler.attach(*avg);
    avg->add_option("--method", method, "auto | analytic3 | grid | mcmc")->capture_default_str();
    avg->add_option("--resolution", resolution, "grid nodes per axis")->capture_default_str();
    avg->add_option("--dump-samples", dump, "write retained samples as CSV");

    auto* bet = app.add_subcommand("beta", "inverse temperature for a mean energy");
    SpectrumFlags beta_spec;
    beta_spec.attach(*bet, false);

    auto* cmp = app.add_subcommand("compare", "microcanonical average against the Gibbs distribution");
    SpectrumFlags cmp_spec;
    SamplerFlags cmp_sampler;
    cmp_spec.attach(*cmp, true);
    cmp_sampler.attach(*cmp);

    auto* swp = app.add_subcommand("sweep", "comparison across spectrum sizes");
    SweepFlags sweep_flags;
    SamplerFlags sweep_sampler;
    sweep_flags.attach(*swp);
    sweep_sampler.attach(*swp);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kDomainFailure;
    }

    try {
        if (*rep) return reproduce(g, tol_scale, out);
        if (*avg) return average(g, avg_spec.resolve(avg_sampler, g), method, resolution, dump, out);
        if (*bet) {
            SamplerFlags unused;
            CLI::App scratch;
            unused.attach(scratch);
            const auto spec = beta_spec.resolve(unused, g);
            return beta(g, spec.spectrum, spec.energy, out);
        }
        if (*cmp) return compare_cmd(g, cmp_spec.resolve(cmp_sampler, g), out);
        if (*swp) return sweep(g, sweep_flags, sweep_sampler, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kDomainFailure;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
    return kInternalError;
}

} // namespace ens::cli
