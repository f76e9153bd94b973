#include "wlsapprox/serialization.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "wlsapprox/errors.hpp"

namespace wlsapprox {

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items())
    if (!ok.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

const json& member(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("missing key '" + std::string(key) + "' in " + where);
  return *it;
}

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + " must be a number");
  return v.get<double>();
}

std::uint64_t whole(const json& v, const std::string& what) {
  if (!v.is_number_integer() || (v.is_number_integer() && v.get<std::int64_t>() < 0))
    throw ConfigError(what + " must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::string text(const json& v, const std::string& what) {
  if (!v.is_string()) throw ConfigError(what + " must be a string");
  return v.get<std::string>();
}

}  // namespace

// ---------------------------------------------------------------------------
// problem configuration

ProblemInstance ProblemConfig::instance() const { return ProblemInstance(basis, weights, d, M); }

SpectrumFamily ProblemConfig::family() const {
  SpectrumFamily f;
  f.kind = family_kind.value_or(SpectrumFamily::Kind::tensor);
  f.weights = weights;
  f.scale = family_scale;
  return f;
}

json to_json(const ProblemConfig& config) {
  json weights;
  if (config.weights.kind == WeightFamily::Kind::algebraic) {
    weights = {{"kind", "algebraic"}, {"alpha", config.weights.alpha}};
    if (!config.weights.gamma.empty()) weights["gamma"] = config.weights.gamma;
  } else {
    weights = {{"kind", "exponential"}, {"q", config.weights.q}, {"A", config.weights.A}};
  }
  json doc = {{"basis", {{"kind", to_string(config.basis)}}},
              {"weights", weights},
              {"d", config.d},
              {"M", config.M}};
  if (config.family_kind)
    doc["family"] = {{"kind", to_string(*config.family_kind)}, {"scale", config.family_scale}};
  return doc;
}

ProblemConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  reject_unknown_keys(doc, {"basis", "weights", "d", "M", "family"}, "configuration");
  ProblemConfig cfg;

  const json& basis = member(doc, "basis", "configuration");
  reject_unknown_keys(basis, {"kind"}, "basis");
  cfg.basis = basis_kind_from_string(text(member(basis, "kind", "basis"), "basis.kind"));

  const json& w = member(doc, "weights", "configuration");
  const std::string wkind = text(member(w, "kind", "weights"), "weights.kind");
  if (wkind == "algebraic") {
    reject_unknown_keys(w, {"kind", "alpha", "gamma"}, "weights");
    cfg.weights.kind = WeightFamily::Kind::algebraic;
    cfg.weights.alpha = number(member(w, "alpha", "weights"), "weights.alpha");
    if (auto it = w.find("gamma"); it != w.end()) {
      if (!it->is_array()) throw ConfigError("weights.gamma must be an array");
      for (const auto& g : *it) cfg.weights.gamma.push_back(number(g, "weights.gamma entry"));
    }
  } else if (wkind == "exponential") {
    reject_unknown_keys(w, {"kind", "q", "A"}, "weights");
    cfg.weights.kind = WeightFamily::Kind::exponential;
    cfg.weights.q = number(member(w, "q", "weights"), "weights.q");
    cfg.weights.A = w.contains("A") ? number(w.at("A"), "weights.A") : 1.0;
  } else {
    throw ConfigError("unknown weight family '" + wkind + "'");
  }

  const std::uint64_t d = whole(member(doc, "d", "configuration"), "d");
  if (d < 1 || d > 64) throw ConfigError("d must lie in 1..64");
  cfg.d = static_cast<int>(d);
  cfg.M = whole(member(doc, "M", "configuration"), "M");
  if (cfg.M < 1) throw ConfigError("M must be at least 1");

  if (auto it = doc.find("family"); it != doc.end()) {
    reject_unknown_keys(*it, {"kind", "scale"}, "family");
    cfg.family_kind = family_kind_from_string(text(member(*it, "kind", "family"), "family.kind"));
    if (it->contains("scale")) cfg.family_scale = number(it->at("scale"), "family.scale");
    if (!(cfg.family_scale > 0.0)) throw ConfigError("family.scale must be positive");
  }
  return cfg;
}

ProblemConfig parse_config(const std::string& text_doc) {
  json doc;
  try {
    doc = json::parse(text_doc);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(doc);
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_hash(const ProblemConfig& config) {
  const std::string canonical = to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[static_cast<std::size_t>(i)] = kHex[h & 0xf];
  return out;
}

// ---------------------------------------------------------------------------
// results

json to_json(const Count& c) {
  if (c.is_finite()) return c.value();
  return "inf";
}

json to_json(const SampleSet& s) {
  json nodes = json::array();
  for (std::size_t i = 0; i < s.n; ++i) {
    const auto x = s.node(i);
    nodes.push_back(std::vector<double>(x.begin(), x.end()));
  }
  return {{"d", s.d}, {"m", s.m}, {"n", s.n}, {"seed", s.seed},
          {"nodes", nodes}, {"h_values", s.h_values}};
}

SampleSet sample_set_from_json(const json& doc) {
  try {
    SampleSet s;
    s.d = doc.at("d").get<int>();
    s.m = doc.at("m").get<std::size_t>();
    s.n = doc.at("n").get<std::size_t>();
    s.seed = doc.at("seed").get<std::uint64_t>();
    s.h_values = doc.at("h_values").get<std::vector<double>>();
    for (const auto& node : doc.at("nodes")) {
      const auto x = node.get<std::vector<double>>();
      if (x.size() != static_cast<std::size_t>(s.d)) throw ConfigError("node dimension mismatch");
      s.nodes.insert(s.nodes.end(), x.begin(), x.end());
    }
    if (s.nodes.size() != s.n * static_cast<std::size_t>(s.d) || s.h_values.size() != s.n)
      throw ConfigError("sample set length mismatch");
    return s;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed sample set: ") + e.what());
  }
}

json to_json(const WlsModel& model) {
  json coeffs = json::array();
  for (Eigen::Index k = 0; k < model.coeffs.size(); ++k)
    coeffs.push_back({model.coeffs(k).real(), model.coeffs(k).imag()});
  return {{"m", model.m},
          {"n", model.sample.n},
          {"seed", model.sample.seed},
          {"coeffs", coeffs},
          {"deviation", model.deviation},
          {"retries", model.retries},
          {"condition", model.condition},
          {"normal_residual", model.normal_residual}};
}

json to_json(const ErrorEstimate& e) {
  return {{"label", e.label},       {"n", e.n},
          {"m", e.m},               {"delta", e.delta},
          {"R", e.R},               {"mean_sq", e.mean_sq},
          {"std_err", e.std_err},   {"bound_sq", e.bound_sq},
          {"retries_mean", e.retries_mean}, {"within_bound", e.within_bound()}};
}

json to_json(const ConcentrationReport& r) {
  return {{"m", r.m},
          {"n", r.n},
          {"t", r.t},
          {"R", r.R},
          {"exceed_count", r.exceed_count},
          {"empirical_prob", r.empirical_prob},
          {"raw_bound", r.raw_bound},
          {"bound", r.bound},
          {"holds", r.holds()}};
}

json to_json(const DecayReport& r) {
  json rows = json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"n", row.n},
                    {"m", row.m},
                    {"worst_label", row.worst_label},
                    {"mean_sq", row.mean_sq},
                    {"std_err", row.std_err},
                    {"error_estimate", row.error_estimate},
                    {"bound_wor", row.bound_wor},
                    {"bound_geometric", row.bound_geometric},
                    {"retries_mean", row.retries_mean},
                    {"holds", row.holds()}});
  return {{"q", r.q},
          {"A", r.A},
          {"q_error", r.q_error},
          {"A_error", r.A_error},
          {"q2", r.q2},
          {"delta", decay_delta()},
          {"R", r.R},
          {"curves_ordered", r.curves_ordered()},
          {"all_hold", r.all_hold()},
          {"rows", rows}};
}

json to_json(const ComplexityTable& table) {
  json rows = json::array();
  for (const auto& row : table.rows)
    rows.push_back({{"eps", row.eps},
                    {"d", row.d},
                    {"n_wor", to_json(row.n_wor)},
                    {"n_wor_quarter", to_json(row.n_wor_quarter)},
                    {"n_wor_scaled", to_json(row.n_wor_scaled)},
                    {"mean_bound_log", row.mean_bound_log},
                    {"prob_bound_log", row.prob_bound_log},
                    {"mean_bound_pow", row.mean_bound_pow},
                    {"prob_bound_pow", row.prob_bound_pow}});
  return {{"criterion", to_string(table.criterion)},
          {"delta", table.delta},
          {"omega", table.omega},
          {"rows", rows}};
}

json to_json(const TransferRow& row) {
  return {{"eps", row.eps},
          {"d", row.d},
          {"n_wor", to_json(row.n_wor)},
          {"mean_bound_log", row.mean_bound_log},
          {"mean_bound_pow", row.mean_bound_pow},
          {"prob_bound_log", row.prob_bound_log},
          {"prob_bound_pow", row.prob_bound_pow},
          {"ratio_mean_log", row.ratio_mean_log},
          {"ratio_mean_pow", row.ratio_mean_pow},
          {"ratio_prob_log", row.ratio_prob_log},
          {"ratio_prob_pow", row.ratio_prob_pow}};
}

json to_json(const TractabilityReport& r) {
  json pairs = json::array();
  for (const auto& p : r.pairs)
    pairs.push_back({{"alpha", p.alpha}, {"beta", p.beta}, {"verdict", to_string(p.verdict)}});
  json doc = {{"notion", r.notion.name()},
              {"verdict", to_string(r.verdict)},
              {"exponents", r.exponents},
              {"residual", r.residual},
              {"eps_grid", r.eps_grid},
              {"d_grid", r.d_grid},
              {"note", r.note}};
  if (!pairs.empty()) doc["pairs"] = pairs;
  return doc;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

CsvWriter& CsvWriter::add(const std::string& field) {
  current_.push_back(field);
  return *this;
}

CsvWriter& CsvWriter::add(double v) { return add(format_double(v)); }

CsvWriter& CsvWriter::add(std::size_t v) { return add(std::to_string(v)); }

CsvWriter& CsvWriter::add(const Count& c) { return add(c.str()); }

void CsvWriter::end_row() {
  if (current_.size() != header_.size())
    throw ContractViolation("CSV row has " + std::to_string(current_.size()) + " fields, expected " +
                            std::to_string(header_.size()));
  rows_.push_back(std::move(current_));
  current_.clear();
}

std::string CsvWriter::str() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    out += '\n';
  };
  line(header_);
  for (const auto& r : rows_) line(r);
  return out;
}

}  // namespace wlsapprox
