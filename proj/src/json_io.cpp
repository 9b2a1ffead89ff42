#include "pir/json_io.hpp"

#include <fstream>

namespace pir::io {

namespace {

using nlohmann::json;

void check_version(const json& j, const char* what) {
  if (j.contains("format_version") && j.at("format_version").get<int>() != kFormatVersion)
    throw Error(Errc::parse_error, std::string(what) + ": unsupported format_version");
}

json rationals_to_json(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& r : v) out.push_back(to_fraction(r));
  return out;
}

std::vector<Rational> rationals_from_json(const json& j) {
  std::vector<Rational> out;
  for (const auto& e : j) out.push_back(parse_fraction(e.get<std::string>()));
  return out;
}

json matrix_to_json(const gf::FieldMatrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows; ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols; ++c) row.push_back(m.at(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

json pattern_to_json(const pattern::CollusionPattern& p) {
  json j;
  j["format_version"] = kFormatVersion;
  j["n"] = p.n_databases;
  j["sets"] = p.sets;
  return j;
}

pattern::CollusionPattern pattern_from_json(const json& j) {
  check_version(j, "pattern");
  if (!j.contains("n") || !j.contains("sets"))
    throw Error(Errc::parse_error, "pattern file needs \"n\" and \"sets\"");
  int n = j.at("n").get<int>();
  std::vector<std::vector<int>> sets = j.at("sets").get<std::vector<std::vector<int>>>();
  return pattern::normalize(sets, n);
}

json plan_to_json(const scheme::SchemePlan& plan, bool full) {
  json j;
  j["format_version"] = kFormatVersion;
  j["pattern"] = pattern_to_json(plan.pat);
  j["k"] = plan.k_messages;
  j["theta"] = plan.theta;
  j["y"] = rationals_to_json(plan.y);
  j["s"] = to_fraction(plan.s);
  j["l"] = plan.block_length;
  j["q"] = plan.field;
  j["seed"] = plan.seed;
  j["mds_mode"] = plan.mds_mode == scheme::MdsMode::vandermonde ? "vandermonde" : "sampled";
  json subsets = json::array();
  for (const auto& s : plan.subsets) {
    json e;
    e["subset"] = s.members;
    e["budget"] = s.budget;
    json ranges = json::array();
    for (const auto& [start, len] : s.ranges)
      ranges.push_back({{"start", start + 1}, {"count", len}});  // 1-based like the tables
    e["allocation"] = std::move(ranges);
    subsets.push_back(std::move(e));
  }
  j["allocation"] = std::move(subsets);
  if (full) {
    scheme::Materialized mat = scheme::materialize(plan);
    json mixing = json::array();
    for (const auto& u : mat.mixing) mixing.push_back(matrix_to_json(u));
    j["matrices"]["mixing"] = std::move(mixing);
    json mds;
    for (const auto& [size, g] : mat.mds_by_size) mds[std::to_string(size)] = matrix_to_json(g);
    j["matrices"]["mds"] = std::move(mds);
  }
  return j;
}

scheme::SchemePlan plan_from_json(const json& j) {
  check_version(j, "plan");
  pattern::CollusionPattern p = pattern_from_json(j.at("pattern"));
  scheme::SynthesizeOptions opts;
  opts.y = rationals_from_json(j.at("y"));
  opts.field = j.at("q").get<uint32_t>();
  scheme::SchemePlan plan = scheme::synthesize(p, j.at("k").get<int>(), j.at("theta").get<int>(),
                                               j.at("seed").get<uint64_t>(), opts);
  // The allocation is derived, not trusted; reject files whose recorded shape
  // disagrees with the derivation.
  if (j.at("l").get<long long>() != plan.block_length)
    throw Error(Errc::parse_error, "plan file records a different block length");
  return plan;
}

json certificate_to_json(const converse::Certificate& c) {
  json j;
  j["format_version"] = kFormatVersion;
  j["pattern"] = pattern_to_json(c.pat);
  j["k"] = c.k_messages;
  j["x"] = rationals_to_json(c.x);
  j["g"] = c.g.str();
  json gm = json::array();
  for (const auto& v : c.gm) gm.push_back(v.str());
  j["gm"] = std::move(gm);
  json dels = json::array();
  for (const auto& d : c.deletions)
    dels.push_back({{"set_pos", d.set_pos + 1}, {"index", d.index}});
  j["deletions"] = std::move(dels);
  json steps = json::array();
  for (const auto& s : c.steps)
    steps.push_back({{"a1_pos", s.a1_pos + 1}, {"a2_pos", s.a2_pos + 1}});
  j["steps"] = std::move(steps);
  long long fulls = 0, empties = 0;
  for (const auto& s : c.final.sets) {
    if (static_cast<int>(s.size()) == c.final.n_databases) ++fulls;
    else if (s.empty()) ++empties;
  }
  j["final_counts"] = {{"full", fulls}, {"empty", empties}};
  j["bound"] = to_fraction(c.bound);
  return j;
}

converse::Certificate certificate_from_json(const json& j) {
  check_version(j, "certificate");
  converse::Certificate c;
  c.pat = pattern_from_json(j.at("pattern"));
  c.k_messages = j.at("k").get<int>();
  c.x = rationals_from_json(j.at("x"));
  c.g = Int(j.at("g").get<std::string>());
  for (const auto& e : j.at("gm")) c.gm.emplace_back(e.get<std::string>());
  for (const auto& e : j.at("deletions"))
    c.deletions.push_back({e.at("set_pos").get<int>() - 1, e.at("index").get<int>()});
  for (const auto& e : j.at("steps")) {
    converse::MergeStep s;
    s.a1_pos = e.at("a1_pos").get<int>() - 1;
    s.a2_pos = e.at("a2_pos").get<int>() - 1;
    c.steps.push_back(std::move(s));
  }
  c.bound = parse_fraction(j.at("bound").get<std::string>());
  return c;
}

json transcript_to_json(const sim::Transcript& t) {
  json j;
  j["format_version"] = kFormatVersion;
  j["theta"] = t.plan.theta;
  j["k"] = t.plan.k_messages;
  j["l"] = t.plan.block_length;
  j["q"] = t.plan.field;
  j["downloaded"] = t.downloaded;
  j["rate"] = to_fraction(sim::measured_rate(t));
  json queries = json::array();
  for (const auto& q : t.queries)
    queries.push_back({{"database", q.database}, {"rows", matrix_to_json(q.rows)}});
  j["queries"] = std::move(queries);
  json answers = json::array();
  for (const auto& a : t.answers)
    answers.push_back({{"database", a.database}, {"symbols", a.symbols}});
  j["answers"] = std::move(answers);
  j["decoded"] = t.decoded;
  return j;
}

json messages_to_json(uint32_t q, const std::vector<std::vector<uint32_t>>& w) {
  json j;
  j["format_version"] = kFormatVersion;
  j["q"] = q;
  j["messages"] = w;
  return j;
}

std::vector<std::vector<uint32_t>> messages_from_json(const json& j, uint32_t expect_q,
                                                      long long expect_len) {
  check_version(j, "messages");
  if (j.at("q").get<uint32_t>() != expect_q)
    throw Error(Errc::parse_error, "messages use a different field than the plan");
  auto w = j.at("messages").get<std::vector<std::vector<uint32_t>>>();
  for (const auto& m : w) {
    if (static_cast<long long>(m.size()) != expect_len)
      throw Error(Errc::parse_error, "message length differs from the plan's L");
    for (uint32_t v : m)
      if (v >= expect_q) throw Error(Errc::parse_error, "message symbol outside the field");
  }
  return w;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, "cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, path + ": " + e.what());
  }
  return j;
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::parse_error, "cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace pir::io
