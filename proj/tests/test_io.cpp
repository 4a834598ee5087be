#include "ens/errors.hpp"
#include "ens/io.hpp"

#include "doctest.h"

#include <cmath>
#include <sstream>

using namespace ens;
using ens::io::json;

TEST_CASE("level lists") {
    CHECK(io::parse_level_list("0,5,8") == std::vector<double>{0, 5, 8});
    CHECK(io::parse_level_list(" -1.5 , 2e1") == std::vector<double>{-1.5, 20});
    CHECK_THROWS_AS(io::parse_level_list("0,,8"), ConfigError);
    CHECK_THROWS_AS(io::parse_level_list("0,five"), ConfigError);
    CHECK_THROWS_AS(io::parse_level_list(""), ConfigError);

    CHECK(io::levels_from_json(json::parse("[3, 1, 2]")) == std::vector<double>{3, 1, 2});
    CHECK_THROWS_AS(io::levels_from_json(json::parse("[1, \"a\"]")), ConfigError);
}

TEST_CASE("states from json") {
    const auto x = io::state_from_json(json::parse("[0.6, [0, 0.8]]"));
    CHECK(x.size() == 2);
    CHECK(x[1] == std::complex<double>(0.0, 0.8));
    CHECK_THROWS_AS(io::state_from_json(json::parse("[1, 1]")), NormalizationError);
    const auto y = io::state_from_json(json::parse("[1, 1]"), Normalize::Renormalize);
    CHECK(std::norm(y[0]) == doctest::Approx(0.5));
    CHECK_THROWS_AS(io::state_from_json(json::parse("[[1, 2, 3]]")), ConfigError);
}

TEST_CASE("ensemble spec round trip") {
    EnsembleSpec spec{Spectrum({8.0, 0.0, 5.0}), 2.5, Measure::ProbabilityUniform};
    spec.sampler.seed = 9;
    spec.sampler.chains = 2;
    spec.sampler.kernel = Kernel::RandomWalk;

    const json j = io::to_json(spec);
    CHECK(j.at("levels") == json::parse("[8.0, 0.0, 5.0]"));
    CHECK(j.at("measure") == "probability");

    const auto back = io::spec_from_json(json::parse(j.dump()));
    CHECK(back.spectrum.user_levels() == spec.spectrum.user_levels());
    CHECK(back.energy == spec.energy);
    CHECK(back.measure == spec.measure);
    CHECK(io::to_json(back.sampler) == io::to_json(spec.sampler));

    CHECK_THROWS_AS(io::spec_from_json(json::parse(R"({"levels": [0, 1]})")), ConfigError);
    CHECK_THROWS_AS(io::spec_from_json(json::parse(R"({"levels": [0, 1], "energy": 0.5, "measure": "flat"})")),
                    ConfigError);
    CHECK_THROWS_AS(io::sampler_from_json(json::parse(R"({"chains": 0})")), ConfigError);
}

TEST_CASE("results are reported in user order") {
    const auto r = compare(EnsembleSpec{Spectrum({8.0, 0.0, 5.0}), 2.0});
    const json j = io::to_json(r);
    const auto micro = j.at("micro").at("mean_probs").get<std::vector<double>>();
    CHECK(micro[1] == doctest::Approx(0.673607).epsilon(1e-5));
    CHECK(micro[0] == doctest::Approx(0.122678).epsilon(1e-5));
    CHECK(j.at("canon").at("beta").get<double>() == doctest::Approx(0.2223494));
    CHECK(j.at("max_rel_diff").get<double>() == r.max_rel_diff);
}

TEST_CASE("csv output") {
    CHECK(io::format_real(0.1) == "0.10000000000000001");
    CHECK(std::stod(io::format_real(1.0 / 3.0)) == 1.0 / 3.0);

    const auto r = compare(EnsembleSpec{Spectrum({0, 1, 2}), 0.6});
    const std::string csv = io::sweep_csv({r});
    std::istringstream in(csv);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "N,max_rel_diff,l1_diff,beta,stderr_max");
    CHECK(row.rfind("3,", 0) == 0);
    CHECK(std::count(row.begin(), row.end(), ',') == 4);

    std::ostringstream os;
    io::write_sample_header(os, 3);
    io::write_sample_row(os, {0.5, 0.25, 0.25});
    CHECK(os.str() == "p_1,p_2,p_3\n0.5,0.25,0.25\n");
}
