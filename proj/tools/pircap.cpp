// pircap: capacity, schemes, and converse certificates for private
// information retrieval under arbitrary database-collusion patterns.

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <optional>
#include <string>

#include "pir/capacity.hpp"
#include "pir/converse.hpp"
#include "pir/json_io.hpp"
#include "pir/privacy.hpp"
#include "pir/sim.hpp"

using nlohmann::json;
using namespace pir;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;

pattern::CollusionPattern load_pattern(const std::string& path) {
  return io::pattern_from_json(io::load_json_file(path));
}

std::optional<std::vector<Rational>> parse_y(const std::string& arg) {
  if (arg.empty()) return std::nullopt;
  std::vector<Rational> y;
  size_t pos = 0;
  while (pos <= arg.size()) {
    size_t comma = arg.find(',', pos);
    if (comma == std::string::npos) comma = arg.size();
    y.push_back(parse_fraction(arg.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return y;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

int cmd_lp(const std::string& pattern_path, bool as_json) {
  auto p = load_pattern(pattern_path);
  auto b = pattern::incidence(p);
  auto lp1 = ratlp::solve(ratlp::build_lp1(b));
  auto lp2 = ratlp::solve(ratlp::build_lp2(b));
  if (as_json) {
    json j;
    j["format_version"] = io::kFormatVersion;
    j["pattern"] = io::pattern_to_json(p);
    j["lp1"] = {{"value", to_fraction(lp1.value)}, {"y", json::array()}};
    for (const auto& v : lp1.vector) j["lp1"]["y"].push_back(to_fraction(v));
    j["lp2"] = {{"value", to_fraction(lp2.value)}, {"x", json::array()}};
    for (const auto& v : lp2.vector) j["lp2"]["x"].push_back(to_fraction(v));
    j["dual_equal"] = ratlp::check_duality(lp1, lp2);
    emit(j);
  } else {
    std::cout << "pattern " << pattern::to_string(p) << " with N=" << p.n_databases << "\n";
    std::cout << "LP1 optimum S*  = " << to_fraction(lp1.value) << "\n";
    std::cout << "y* = " << format_vector(lp1.vector) << "\n";
    std::cout << "LP2 optimum S2* = " << to_fraction(lp2.value) << "\n";
    std::cout << "x* = " << format_vector(lp2.vector) << " (sets in canonical order)\n";
    std::cout << "duality: " << (ratlp::check_duality(lp1, lp2) ? "S* = S2*" : "VIOLATED") << "\n";
  }
  return kExitOk;
}

int cmd_capacity(const std::string& pattern_path, int k, bool as_json) {
  auto p = load_pattern(pattern_path);
  auto r = capacity::capacity_of_pattern(p, k);
  if (as_json) {
    json j;
    j["format_version"] = io::kFormatVersion;
    j["pattern"] = io::pattern_to_json(p);
    j["k"] = k;
    j["s_star"] = to_fraction(r.s_star);
    j["capacity"] = to_fraction(r.value);
    j["capacity_decimal"] = to_decimal(r.value, 6);
    j["y_star"] = json::array();
    for (const auto& v : r.y_star) j["y_star"].push_back(to_fraction(v));
    j["x_star"] = json::array();
    for (const auto& v : r.x_star) j["x_star"].push_back(to_fraction(v));
    emit(j);
  } else {
    std::cout << "pattern " << pattern::to_string(p) << " with N=" << p.n_databases
              << ", K=" << k << "\n";
    std::cout << "S*  = " << to_fraction(r.s_star) << "\n";
    std::cout << "y*  = " << format_vector(r.y_star) << "\n";
    std::cout << "x*  = " << format_vector(r.x_star) << " (sets in canonical order)\n";
    std::cout << "C_P = " << to_fraction(r.value) << " (about " << to_decimal(r.value, 6)
              << ")\n";
  }
  return kExitOk;
}

int cmd_synthesize(const std::string& pattern_path, int k, int theta, uint64_t seed,
                   const std::string& y_arg, const std::string& out, bool full, bool as_json) {
  auto p = load_pattern(pattern_path);
  scheme::SynthesizeOptions opts;
  opts.y = parse_y(y_arg);
  auto plan = scheme::synthesize(p, k, theta, seed, opts);
  json j = io::plan_to_json(plan, full);
  if (!out.empty()) io::save_json_file(out, j);
  if (as_json || out.empty()) {
    emit(j);
  } else {
    std::cout << "plan: K=" << k << " theta=" << theta << " L=" << plan.block_length
              << " q=" << plan.field << " S=" << to_fraction(plan.s)
              << " rate=" << to_fraction(plan.plan_rate()) << " -> " << out << "\n";
  }
  return kExitOk;
}

int cmd_simulate(const std::string& plan_path, uint64_t seed, const std::string& messages_path,
                 const std::string& transcript_out, bool as_json) {
  auto plan = io::plan_from_json(io::load_json_file(plan_path));
  std::vector<std::vector<uint32_t>> messages;
  if (messages_path.empty()) {
    messages = sim::random_messages(plan, seed);
  } else {
    messages = io::messages_from_json(io::load_json_file(messages_path), plan.field,
                                      plan.block_length);
    if (static_cast<int>(messages.size()) != plan.k_messages)
      throw Error(Errc::parse_error, "message count differs from the plan's K");
  }
  sim::Transcript t = sim::run(plan, messages);
  bool match = t.decoded == messages[static_cast<size_t>(plan.theta - 1)];
  if (!transcript_out.empty()) io::save_json_file(transcript_out, io::transcript_to_json(t));
  if (as_json) {
    json j;
    j["format_version"] = io::kFormatVersion;
    j["decoded_match"] = match;
    j["downloaded"] = t.downloaded;
    j["rate"] = to_fraction(sim::measured_rate(t));
    emit(j);
  } else {
    std::cout << "decoded matches W_theta: " << (match ? "yes" : "NO") << "\n";
    std::cout << "downloaded symbols: " << t.downloaded << "\n";
    std::cout << "rate: " << to_fraction(sim::measured_rate(t)) << "\n";
  }
  return match ? kExitOk : kExitVerifyFail;
}

int cmd_verify(const std::string& plan_path, bool empirical, long long trials, int theta_b,
               bool as_json) {
  auto plan = io::plan_from_json(io::load_json_file(plan_path));
  auto report = privacy::verify_rank_privacy(plan);
  json j;
  j["format_version"] = io::kFormatVersion;
  j["rank_pass"] = report.pass;
  j["sets"] = json::array();
  for (const auto& s : report.sets) {
    json e;
    e["colluding_set"] = s.colluding_set;
    e["tau"] = s.tau;
    e["ranks"] = s.ranks;
    e["pass"] = s.pass;
    if (!s.detail.empty()) e["detail"] = s.detail;
    j["sets"].push_back(std::move(e));
  }
  bool ok = report.pass;
  if (!as_json) {
    for (const auto& s : report.sets) {
      std::cout << "set {";
      for (size_t i = 0; i < s.colluding_set.size(); ++i)
        std::cout << (i ? "," : "") << s.colluding_set[i];
      std::cout << "}: tau=" << s.tau << " ranks=";
      for (size_t i = 0; i < s.ranks.size(); ++i) std::cout << (i ? "/" : "") << s.ranks[i];
      std::cout << (s.pass ? " pass" : " FAIL " + s.detail) << "\n";
    }
    std::cout << "rank privacy: " << (report.pass ? "pass" : "FAIL") << "\n";
  }
  if (empirical) {
    int tb = theta_b > 0 ? theta_b : (plan.theta % plan.k_messages) + 1;
    auto emp = privacy::empirical_indistinguishability(plan.pat, plan.k_messages, plan.theta, tb,
                                                       plan.field, trials, plan.seed);
    j["empirical"] = {{"trials", trials}, {"theta_b", tb}, {"max_tv", emp.max_tv}};
    if (!as_json)
      std::cout << "empirical max TV over sets (" << trials << " trials, theta_b=" << tb
                << "): " << emp.max_tv << "\n";
    ok = ok && emp.max_tv < 0.02;
  }
  if (as_json) emit(j);
  return ok ? kExitOk : kExitVerifyFail;
}

int cmd_certify(const std::string& pattern_path, int k, const std::string& verify_path,
                const std::string& out, bool as_json) {
  auto p = load_pattern(pattern_path);
  if (!verify_path.empty()) {
    auto cert = io::certificate_from_json(io::load_json_file(verify_path));
    auto res = converse::verify_certificate(cert, p);
    if (as_json) {
      emit(json{{"format_version", io::kFormatVersion},
                {"ok", res.ok},
                {"failure", res.first_failure}});
    } else {
      std::cout << (res.ok ? "certificate verifies" : "certificate REJECTED: " + res.first_failure)
                << "\n";
    }
    return res.ok ? kExitOk : kExitVerifyFail;
  }
  auto [bound, cert] = converse::converse_bound(p, k);
  json j = io::certificate_to_json(cert);
  if (!out.empty()) io::save_json_file(out, j);
  if (as_json || out.empty()) {
    emit(j);
  } else {
    std::cout << "converse bound C <= " << to_fraction(bound) << " with "
              << cert.steps.size() << " merge steps -> " << out << "\n";
  }
  return kExitOk;
}

struct DemoRow {
  std::string name;
  pattern::CollusionPattern pat;
  int k;
  Rational expect_s;
  Rational expect_capacity;
};

int cmd_demo(bool as_json) {
  using pattern::normalize;
  std::vector<DemoRow> rows;
  rows.push_back({"P1", normalize({{1, 2, 3}, {1, 4}, {2, 4}, {3, 4}, {5}}, 5), 2,
                  Rational(8, 3), Rational(8, 11)});
  rows.push_back({"P2",
                  normalize({{1, 3, 4}, {2, 3, 4}, {1, 3, 5}, {2, 3, 5}, {1, 4, 5}, {2, 4, 5},
                             {3, 4, 5}},
                            5),
                  2, Rational(2), Rational(2, 3)});
  rows.push_back({"P3", normalize({{1, 4}, {2, 5}, {1, 2, 3, 6}, {3, 7}, {4, 5, 6, 7}}, 7), 2,
                  Rational(2), Rational(2, 3)});
  rows.push_back({"P4",
                  normalize({{1, 2, 3}, {1, 3, 4}, {2, 3, 4}, {1, 2, 5}, {1, 3, 5}, {2, 3, 5},
                             {4, 5}},
                            5),
                  3, Rational(7, 4), Rational(49, 93)});
  rows.push_back({"P5", normalize({{1, 3}, {2, 3}, {3, 4}, {1, 5}, {2, 5}, {4, 5}}, 5), 2,
                  Rational(3), Rational(3, 4)});
  rows.push_back({"P6", normalize({{1, 2}, {2, 3, 4}, {2, 5}, {1, 3, 5}, {1, 4, 5}, {3, 4, 5}}, 5),
                  2, Rational(9, 5), Rational(9, 14)});

  bool all_ok = true;
  json jrows = json::array();
  for (const auto& row : rows) {
    auto cap = capacity::capacity_of_pattern(row.pat, row.k);
    auto [bound, cert] = converse::converse_bound(row.pat, row.k);
    auto plan = scheme::synthesize(row.pat, row.k, 1, 7);
    auto messages = sim::random_messages(plan, 7);
    auto t = sim::run(plan, messages);
    bool decoded = t.decoded == messages[0];
    auto rate = sim::measured_rate(t);
    auto priv = privacy::verify_rank_privacy(plan);
    bool ok = cap.s_star == row.expect_s && cap.value == row.expect_capacity &&
              bound == cap.value && decoded && rate == cap.value && priv.pass;
    all_ok = all_ok && ok;
    if (as_json) {
      jrows.push_back({{"name", row.name},
                       {"s_star", to_fraction(cap.s_star)},
                       {"capacity", to_fraction(cap.value)},
                       {"converse_bound", to_fraction(bound)},
                       {"scheme_rate", to_fraction(rate)},
                       {"decoded", decoded},
                       {"privacy_pass", priv.pass},
                       {"pass", ok}});
    } else {
      std::cout << row.name << ": S*=" << to_fraction(cap.s_star) << " (expect "
                << to_fraction(row.expect_s) << "), C=" << to_fraction(cap.value) << " (expect "
                << to_fraction(row.expect_capacity) << "), bound=" << to_fraction(bound)
                << ", scheme L=" << plan.block_length << " rate=" << to_fraction(rate)
                << ", decode=" << (decoded ? "ok" : "BAD")
                << ", privacy=" << (priv.pass ? "ok" : "BAD") << " => "
                << (ok ? "PASS" : "FAIL") << "\n";
    }
  }
  if (as_json)
    emit(json{{"format_version", io::kFormatVersion}, {"rows", jrows}, {"pass", all_ok}});
  else
    std::cout << (all_ok ? "all rows PASS" : "some rows FAIL") << "\n";
  return all_ok ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity of private information retrieval under arbitrary collusion patterns"};
  app.require_subcommand(1);

  std::string pattern_path, plan_path, messages_path, out_path, verify_path, transcript_path;
  std::string y_arg;
  int k = 2, theta = 1, theta_b = 0;
  uint64_t seed = 0;
  long long trials = 100000;
  bool as_json = false, full = false, empirical = false;

  auto* lp = app.add_subcommand("lp", "solve LP1 and LP2 exactly");
  lp->add_option("--pattern", pattern_path, "pattern JSON file")->required();
  lp->add_flag("--json", as_json, "machine-readable output");

  auto* cap = app.add_subcommand("capacity", "compute S* and the capacity");
  cap->add_option("--pattern", pattern_path)->required();
  cap->add_option("--k", k, "number of messages")->required();
  cap->add_flag("--json", as_json);

  auto* syn = app.add_subcommand("synthesize", "build a retrieval scheme plan");
  syn->add_option("--pattern", pattern_path)->required();
  syn->add_option("--k", k)->required();
  syn->add_option("--theta", theta, "desired message index (1-based)");
  syn->add_option("--seed", seed);
  syn->add_option("--y", y_arg, "comma-separated feasible y (defaults to y*)");
  syn->add_option("--out", out_path, "write the plan JSON here");
  syn->add_flag("--full", full, "embed the regenerable matrices");
  syn->add_flag("--json", as_json);

  auto* simc = app.add_subcommand("simulate", "run a plan end-to-end and decode");
  simc->add_option("--plan", plan_path)->required();
  simc->add_option("--seed", seed, "seed for random messages");
  simc->add_option("--messages", messages_path, "fixed messages JSON");
  simc->add_option("--transcript", transcript_path, "dump queries/answers here");
  simc->add_flag("--json", as_json);

  auto* ver = app.add_subcommand("verify", "algebraic (and optional empirical) privacy check");
  ver->add_option("--plan", plan_path)->required();
  ver->add_flag("--empirical", empirical, "also sample view distributions");
  ver->add_option("--trials", trials);
  ver->add_option("--theta-b", theta_b, "second index for the empirical comparison");
  ver->add_flag("--json", as_json);

  auto* cert = app.add_subcommand("certify", "emit or verify a converse certificate");
  cert->add_option("--pattern", pattern_path)->required();
  cert->add_option("--k", k);
  cert->add_option("--out", out_path);
  cert->add_option("--verify", verify_path, "verify this certificate instead of emitting");
  cert->add_flag("--json", as_json);

  auto* demo = app.add_subcommand("demo", "reproduce the worked examples P1..P6");
  demo->add_flag("--json", as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (lp->parsed()) return cmd_lp(pattern_path, as_json);
    if (cap->parsed()) {
      if (k < 1) throw Error(Errc::bad_params, "K must be at least 1");
      return cmd_capacity(pattern_path, k, as_json);
    }
    if (syn->parsed()) return cmd_synthesize(pattern_path, k, theta, seed, y_arg, out_path, full, as_json);
    if (simc->parsed()) return cmd_simulate(plan_path, seed, messages_path, transcript_path, as_json);
    if (ver->parsed()) return cmd_verify(plan_path, empirical, trials, theta_b, as_json);
    if (cert->parsed()) return cmd_certify(pattern_path, k, verify_path, out_path, as_json);
    if (demo->parsed()) return cmd_demo(as_json);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
