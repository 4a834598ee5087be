#pragma once

#include "ens/compare.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ens::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// A JSON array of numbers.
std::vector<double> levels_from_json(const json& j);
/// A JSON array whose entries are numbers or [re, im] pairs.
PureState state_from_json(const json& j, Normalize mode = Normalize::Reject);

/// Comma-separated reals, e.g. "0,5,8".
std::vector<double> parse_level_list(const std::string& text);

json to_json(const SamplerSettings& s);
SamplerSettings sampler_from_json(const json& j, SamplerSettings defaults = {});

/// {"levels": [...], "energy": E, "measure": "...", "sampler": {...}}.
/// Levels are in user order.
json to_json(const EnsembleSpec& spec);
EnsembleSpec spec_from_json(const json& j);

json to_json(const EnsembleAverage& avg, const Spectrum& s);
json to_json(const CanonicalSolution& sol, const Spectrum& s);
json to_json(const ComparisonReport& r);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Round-trip formatting used in CSV output.
std::string format_real(double x);

/// N,max_rel_diff,l1_diff,beta,stderr_max
std::string sweep_csv(const std::vector<ComparisonReport>& reports);
/// p_1..p_N header followed by one row per sample (user order).
void write_sample_header(std::ostream& os, std::size_t n);
void write_sample_row(std::ostream& os, const std::vector<double>& user_probs);

} // namespace ens::io
