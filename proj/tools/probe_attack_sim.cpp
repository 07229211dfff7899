// Command line front end for the period-finding attack simulator.
//
// Every subcommand is deterministic given --seed, builds its whole report in
// memory and then writes it to --out (default stdout) as CSV or JSON.
// Exit codes: 0 success, 1 invalid input, 2 partial failure (bad survey rows).

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "probeattack/attack.hpp"
#include "probeattack/numtheory.hpp"
#include "probeattack/rng.hpp"
#include "probeattack/shor_spectrum.hpp"
#include "probeattack/simon.hpp"
#include "probeattack/stats.hpp"

using namespace probeattack;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kSchemaVersion = "1";

std::string fmt_sig(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::string fmt_fixed(double v, int precision = 4) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string bits(u32 v, u32 n) {
  std::string s(n, '0');
  for (u32 i = 0; i < n; ++i)
    if (v >> (n - 1 - i) & 1) s[i] = '1';
  return s;
}

u32 parse_bits(const std::string& s, u32 n) {
  if (s.empty() || s.size() > 32)
    throw std::invalid_argument("shift must be a nonempty bit string");
  u32 v = 0;
  for (const char ch : s) {
    if (ch != '0' && ch != '1')
      throw std::invalid_argument("shift must contain only 0 and 1");
    v = v << 1 | u32(ch - '0');
  }
  if (n < 32 && v >= (u32(1) << n))
    throw std::invalid_argument("shift does not fit in n bits");
  return v;
}

struct RowSpec {
  u64 N;
  u64 y;
};

std::vector<RowSpec> parse_rows(const std::vector<std::string>& specs) {
  std::vector<RowSpec> rows;
  for (const auto& spec : specs) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size())
      throw std::invalid_argument("row '" + spec + "' is not of the form N:y");
    RowSpec row{};
    const char* b = spec.data();
    auto r1 = std::from_chars(b, b + colon, row.N);
    auto r2 = std::from_chars(b + colon + 1, b + spec.size(), row.y);
    if (r1.ec != std::errc() || r1.ptr != b + colon || r2.ec != std::errc() ||
        r2.ptr != b + spec.size())
      throw std::invalid_argument("row '" + spec + "' is not of the form N:y");
    rows.push_back(row);
  }
  return rows;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file '" + out_path + "'");
  out << text;
}

// ---------------------------------------------------------------- table1 --

int cmd_table1(const std::vector<std::string>& row_specs, const std::string& format,
               const std::string& out_path) {
  auto pairs_in = row_specs.empty() ? shor::default_table1_pairs()
                                    : [&] {
                                        std::vector<std::pair<u64, u64>> p;
                                        for (const auto& r : parse_rows(row_specs))
                                          p.emplace_back(r.N, r.y);
                                        return p;
                                      }();
  const auto rows = shor::table1(pairs_in);
  bool partial = false;
  std::string text;
  if (format == "csv") {
    text += "N,L,phi_N,y,r,A,P_raw,P_rounded,error\n";
    for (const auto& row : rows) {
      text += std::to_string(row.N) + ',';
      if (row.ok()) {
        text += std::to_string(row.L) + ',' + std::to_string(row.phi) + ',' +
                std::to_string(row.y) + ',' + std::to_string(row.r) + ',' +
                std::to_string(row.A) + ',' + fmt_sig(row.P) + ',' + fmt_fixed(row.P) +
                ",\n";
      } else {
        text += ",," + std::to_string(row.y) + ",,,,," + csv_field(row.error) + '\n';
        partial = true;
      }
    }
  } else {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "table1";
    doc["rows"] = json::array();
    for (const auto& row : rows) {
      json j;
      j["N"] = row.N;
      j["y"] = row.y;
      if (row.ok()) {
        j["L"] = row.L;
        j["phi_N"] = row.phi;
        j["r"] = row.r;
        j["A"] = row.A;
        j["P_raw"] = row.P;
        j["P_rounded"] = fmt_fixed(row.P);
        j["error"] = nullptr;
      } else {
        j["L"] = nullptr;
        j["phi_N"] = nullptr;
        j["r"] = nullptr;
        j["A"] = nullptr;
        j["P_raw"] = nullptr;
        j["P_rounded"] = nullptr;
        j["error"] = row.error;
        partial = true;
      }
      doc["rows"].push_back(j);
    }
    text = doc.dump(2) + '\n';
  }
  emit(text, out_path);
  return partial ? 2 : 0;
}

// -------------------------------------------------------------- spectrum --

int cmd_spectrum(u64 N, u64 y, u64 l, const std::string& format,
                 const std::string& out_path) {
  const auto inst = shor::build_instance(N, y, l);
  if (inst.q > (u64(1) << 22))
    throw std::invalid_argument("q exceeds 2^22; spectrum listing refused");
  const auto spec = shor::build_spectrum(inst);
  std::vector<char> in_s(inst.q, 0);
  for (const u64 c : spec.revealing) in_s[c] = 1;

  std::string text;
  if (format == "csv") {
    text += "N,y,l,L,q,r,A,P,S_size\n";
    text += std::to_string(inst.N) + ',' + std::to_string(inst.y) + ',' +
            std::to_string(inst.l) + ',' + std::to_string(inst.L) + ',' +
            std::to_string(inst.q) + ',' + std::to_string(inst.r) + ',' +
            std::to_string(inst.A) + ',' + fmt_sig(spec.miss) + ',' +
            std::to_string(spec.revealing.size()) + "\n\n";
    text += "c,prob,in_S\n";
    for (u64 c = 0; c < inst.q; ++c)
      text += std::to_string(c) + ',' + fmt_sig(spec.probs[c]) + ',' +
              (in_s[c] ? "1\n" : "0\n");
  } else {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "spectrum";
    doc["summary"] = {{"N", inst.N},       {"y", inst.y}, {"l", inst.l},
                      {"L", inst.L},       {"q", inst.q}, {"r", inst.r},
                      {"A", inst.A},       {"P", spec.miss},
                      {"S_size", spec.revealing.size()}};
    doc["records"] = json::array();
    for (u64 c = 0; c < inst.q; ++c)
      doc["records"].push_back(
          {{"c", c}, {"prob", spec.probs[c]}, {"in_S", bool(in_s[c])}});
    text = doc.dump(2) + '\n';
  }
  emit(text, out_path);
  return 0;
}

// ----------------------------------------------------------------- simon --

int cmd_simon(u32 n, const std::optional<std::string>& s_arg, int trials, bool attacked,
              bool leak, u64 seed, const std::string& format,
              const std::string& out_path) {
  if (n < 1 || n > 20) throw std::invalid_argument("n must be in [1, 20]");
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  Rng rng(seed);
  u32 s_true;
  if (s_arg) {
    s_true = parse_bits(*s_arg, n);
  } else {
    s_true = 1 + u32(rng.uniform((u64(1) << n) - 1));
  }
  const auto f = s_true == 0 ? simon::make_one_to_one(n, rng.next())
                             : simon::make_two_to_one(n, s_true, rng.next());
  const u32 budget = 4 * n;

  struct TrialOut {
    simon::SimonRun run;
    std::vector<u32> js;
    std::optional<u32> attacker_s;
  };
  std::vector<TrialOut> outs;
  outs.reserve(std::size_t(trials));
  for (int t = 0; t < trials; ++t) {
    TrialOut o;
    if (attacked) {
      auto* js = &o.js;
      o.run = simon::run_simon_with(
          f,
          [js](const simon::SimonFunction& g, Rng& r) {
            const auto kj = simon::attacked_sample(g, r);
            js->push_back(kj.j);
            return kj.k;
          },
          rng, budget);
      js->resize(o.run.samples.size());
      if (leak) {
        simon::Gf2System sys{n, {}};
        for (std::size_t i = 0; i < o.run.samples.size(); ++i)
          sys.rows.push_back(o.run.samples[i] ^ o.js[i]);
        const auto sol = simon::solve_gf2(sys);
        if (sol.nullity == 1) o.attacker_s = sol.shift;
      }
    } else {
      o.run = simon::run_simon(f, rng, budget);
    }
    outs.push_back(std::move(o));
  }

  const auto verdict_name = [](simon::SimonVerdict v) {
    switch (v) {
      case simon::SimonVerdict::one_to_one: return "one-to-one";
      case simon::SimonVerdict::two_to_one: return "two-to-one";
      default: return "indeterminate";
    }
  };
  const std::string mode = attacked ? "attacked" : "honest";

  std::string text;
  if (format == "csv") {
    text += "trial,mode,user_verdict,s_true,user_s,attacker_s,num_samples,k_list,j_list\n";
    for (int t = 0; t < trials; ++t) {
      const auto& o = outs[std::size_t(t)];
      text += std::to_string(t) + ',' + mode + ',' + verdict_name(o.run.verdict) + ',' +
              bits(s_true, n) + ',';
      if (o.run.shift) text += bits(*o.run.shift, n);
      text += ',';
      if (o.attacker_s) text += bits(*o.attacker_s, n);
      text += ',' + std::to_string(o.run.samples.size()) + ',';
      for (std::size_t i = 0; i < o.run.samples.size(); ++i)
        text += (i ? " " : "") + bits(o.run.samples[i], n);
      text += ',';
      for (std::size_t i = 0; i < o.js.size(); ++i)
        text += (i ? " " : "") + bits(o.js[i], n);
      text += '\n';
    }
  } else {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "simon";
    doc["n"] = n;
    doc["s_true"] = bits(s_true, n);
    doc["mode"] = mode;
    doc["leak"] = leak;
    doc["budget"] = budget;
    doc["runs"] = json::array();
    for (int t = 0; t < trials; ++t) {
      const auto& o = outs[std::size_t(t)];
      json j;
      j["trial"] = t;
      j["user_verdict"] = verdict_name(o.run.verdict);
      j["user_s"] = o.run.shift ? json(bits(*o.run.shift, n)) : json(nullptr);
      j["attacker_s"] = o.attacker_s ? json(bits(*o.attacker_s, n)) : json(nullptr);
      j["num_samples"] = o.run.samples.size();
      j["k_list"] = json::array();
      for (const u32 k : o.run.samples) j["k_list"].push_back(bits(k, n));
      j["j_list"] = json::array();
      for (const u32 jj : o.js) j["j_list"].push_back(bits(jj, n));
      doc["runs"].push_back(j);
    }
    text = doc.dump(2) + '\n';
  }
  emit(text, out_path);
  return 0;
}

// ------------------------------------------------------------ attack-shor --

int cmd_attack_shor(u64 N, u64 y, int trials, bool leak, u64 seed,
                    const std::string& format, const std::string& out_path) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  Rng rng(seed);
  attack::ShorTrialContext ctx(N, y);
  const auto base = shor::build_instance(N, y, 0);
  const auto prof = attack::success_profile(base);

  std::vector<attack::ShorAttackTranscript> ts;
  ts.reserve(std::size_t(trials));
  std::vector<u64> c_counts(base.q, 0);
  int user_hits = 0, attacker_hits = 0;
  for (int t = 0; t < trials; ++t) {
    ts.push_back(ctx.run_attacked(rng, leak));
    const auto& tr = ts.back();
    ++c_counts[tr.user_c];
    if (tr.user_period) ++user_hits;
    if (tr.attacker_period) ++attacker_hits;
  }
  const double chi2 = stats::chi_square_uniform(c_counts);

  const auto opt_u64 = [](const std::optional<u64>& v) {
    return v ? std::to_string(*v) : std::string();
  };

  std::string text;
  if (format == "csv") {
    text +=
        "trial,l,user_c,user_period,user_factor_a,user_factor_b,"
        "attacker_d,attacker_sum,attacker_period,attacker_factor_a,"
        "attacker_factor_b,leaked\n";
    for (int t = 0; t < trials; ++t) {
      const auto& tr = ts[std::size_t(t)];
      text += std::to_string(t) + ',' + std::to_string(tr.instance.l) + ',' +
              std::to_string(tr.user_c) + ',' + opt_u64(tr.user_period) + ',';
      text += tr.user_factors ? std::to_string(tr.user_factors->first) : "";
      text += ',';
      text += tr.user_factors ? std::to_string(tr.user_factors->second) : "";
      text += ',' + opt_u64(tr.attacker_d) + ',' + opt_u64(tr.attacker_sum) + ',' +
              opt_u64(tr.attacker_period) + ',';
      text += tr.attacker_factors ? std::to_string(tr.attacker_factors->first) : "";
      text += ',';
      text += tr.attacker_factors ? std::to_string(tr.attacker_factors->second) : "";
      text += tr.leaked ? ",1\n" : ",0\n";
    }
    text +=
        "\ntrials,user_success_rate,user_success_expected_uniform,"
        "attacker_success_rate,attacker_success_expected,user_c_chi2,"
        "user_c_chi2_df,P_reference\n";
    text += std::to_string(trials) + ',' + fmt_sig(user_hits / double(trials)) + ',' +
            fmt_sig(double(prof.recoverable) / double(base.q)) + ',';
    text += leak ? fmt_sig(attacker_hits / double(trials)) : std::string();
    text += ',' + fmt_sig(prof.honest_mass) + ',' + fmt_sig(chi2) + ',' +
            std::to_string(base.q - 1) + ',' + fmt_sig(shor::miss_probability(base)) +
            '\n';
  } else {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "attack-shor";
    doc["N"] = N;
    doc["y"] = y;
    doc["leak"] = leak;
    doc["transcripts"] = json::array();
    const auto opt_json = [](const std::optional<u64>& v) {
      return v ? json(*v) : json(nullptr);
    };
    for (int t = 0; t < trials; ++t) {
      const auto& tr = ts[std::size_t(t)];
      json j;
      j["trial"] = t;
      j["l"] = tr.instance.l;
      j["user_c"] = tr.user_c;
      j["user_period"] = opt_json(tr.user_period);
      j["user_factors"] =
          tr.user_factors
              ? json::array({tr.user_factors->first, tr.user_factors->second})
              : json(nullptr);
      j["attacker_d"] = opt_json(tr.attacker_d);
      j["attacker_sum"] = opt_json(tr.attacker_sum);
      j["attacker_period"] = opt_json(tr.attacker_period);
      j["attacker_factors"] =
          tr.attacker_factors
              ? json::array({tr.attacker_factors->first, tr.attacker_factors->second})
              : json(nullptr);
      j["leaked"] = tr.leaked;
      doc["transcripts"].push_back(j);
    }
    doc["summary"] = {
        {"trials", trials},
        {"user_success_rate", user_hits / double(trials)},
        {"user_success_expected_uniform", double(prof.recoverable) / double(base.q)},
        {"attacker_success_rate",
         leak ? json(attacker_hits / double(trials)) : json(nullptr)},
        {"attacker_success_expected", prof.honest_mass},
        {"user_c_chi2", chi2},
        {"user_c_chi2_df", base.q - 1},
        {"P_reference", shor::miss_probability(base)}};
    text = doc.dump(2) + '\n';
  }
  emit(text, out_path);
  return 0;
}

// ---------------------------------------------------------------- detect --

int cmd_detect(u64 r_known, u64 L, int trials, bool attacked, u64 seed,
               const std::string& format, const std::string& out_path) {
  if (trials < 1) throw std::invalid_argument("trials must be positive");
  Rng rng(seed);
  const auto sampler = attacked ? attack::attacked_detection_sampler()
                                : attack::honest_detection_sampler();
  const auto res = attack::detect_attack_shor(r_known, L, sampler, trials, rng);
  const u64 q = u64(1) << L;
  const u64 comb = q / r_known;
  const std::string verdict = res.attack_detected ? "attack-detected" : "clean";

  std::string text;
  if (format == "csv") {
    text += "trial,c,violation\n";
    for (std::size_t t = 0; t < res.outcomes.size(); ++t)
      text += std::to_string(t) + ',' + std::to_string(res.outcomes[t]) + ',' +
              (res.outcomes[t] % comb != 0 ? "1\n" : "0\n");
    text += "\nverdict,violations,trials,r_known,L,q\n";
    text += verdict + ',' + std::to_string(res.violations) + ',' +
            std::to_string(trials) + ',' + std::to_string(r_known) + ',' +
            std::to_string(L) + ',' + std::to_string(q) + '\n';
  } else {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "detect";
    doc["records"] = json::array();
    for (std::size_t t = 0; t < res.outcomes.size(); ++t)
      doc["records"].push_back({{"trial", t},
                                {"c", res.outcomes[t]},
                                {"violation", res.outcomes[t] % comb != 0}});
    doc["summary"] = {{"verdict", verdict},   {"violations", res.violations},
                      {"trials", trials},     {"r_known", r_known},
                      {"L", L},               {"q", q}};
    text = doc.dump(2) + '\n';
  }
  emit(text, out_path);
  return 0;
}

// ----------------------------------------------------------------- stats --

int cmd_stats(std::optional<double> P_arg, const std::string& format,
              const std::string& out_path) {
  const double P = P_arg ? *P_arg : shor::analytic_miss();
  const auto s = attack::attacker_stats(P);
  std::string text;
  if (format == "csv") {
    text += "P,n_bar,sd,trials_per_illegal,illegal_prob\n";
    text += fmt_sig(s.miss) + ',' + fmt_sig(s.n_bar) + ',' + fmt_sig(s.sd) + ',' +
            fmt_sig(s.trials_per_illegal) + ',' + fmt_sig(s.illegal_prob) + '\n';
  } else {
    json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = "stats";
    doc["P"] = s.miss;
    doc["n_bar"] = s.n_bar;
    doc["sd"] = s.sd;
    doc["trials_per_illegal"] = s.trials_per_illegal;
    doc["illegal_prob"] = s.illegal_prob;
    text = doc.dump(2) + '\n';
  }
  emit(text, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"period-finding attack simulator"};
  app.require_subcommand(1);

  u64 seed = 0;
  std::string format = "csv";
  std::string out_path;
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--out", out_path, "output file (default stdout)");
  };

  auto* table1 = app.add_subcommand("table1", "survey of miss probabilities");
  std::vector<std::string> row_specs;
  table1->add_option("--rows", row_specs, "N:y pairs, comma separated")
      ->delimiter(',');
  add_common(table1);

  auto* spectrum = app.add_subcommand("spectrum", "full outcome distribution");
  u64 spec_N = 0, spec_y = 0, spec_l = 0;
  spectrum->add_option("--N", spec_N, "modulus")->required();
  spectrum->add_option("--y", spec_y, "base")->required();
  spectrum->add_option("--l", spec_l, "collapsed residue")->capture_default_str();
  add_common(spectrum);

  auto* simon_cmd = app.add_subcommand("simon", "hidden-shift runs");
  u32 simon_n = 0;
  std::string simon_s;
  int simon_trials = 1;
  bool simon_attacked = false;
  bool simon_leak = true;
  simon_cmd->add_option("--n", simon_n, "input bits")->required();
  auto* s_opt = simon_cmd->add_option("--s", simon_s,
                                      "planted shift bits; all zeros = bijection");
  simon_cmd->add_option("--trials", simon_trials, "runs")->capture_default_str();
  simon_cmd->add_flag("--attacked", simon_attacked, "sample through the probe");
  simon_cmd->add_flag("--leak,!--no-leak", simon_leak,
                      "give the attacker the probe register");
  add_common(simon_cmd);

  auto* attack_cmd = app.add_subcommand("attack-shor", "probe attack transcripts");
  u64 atk_N = 0, atk_y = 0;
  int atk_trials = 1;
  bool atk_leak = true;
  attack_cmd->add_option("--N", atk_N, "modulus")->required();
  attack_cmd->add_option("--y", atk_y, "base")->required();
  attack_cmd->add_option("--trials", atk_trials, "trials")->capture_default_str();
  attack_cmd->add_flag("--leak,!--no-leak", atk_leak,
                       "give the attacker the user's public outcome");
  add_common(attack_cmd);

  auto* detect_cmd = app.add_subcommand("detect", "planted-period device audit");
  u64 det_r = 0, det_L = 0;
  int det_trials = 1;
  bool det_attacked = false;
  detect_cmd->add_option("--r-known", det_r, "planted period (power of two)")
      ->required();
  detect_cmd->add_option("--L", det_L, "register width, q = 2^L")->required();
  detect_cmd->add_option("--trials", det_trials, "trials")->capture_default_str();
  detect_cmd->add_flag("--attacked", det_attacked, "audit a probed device");
  add_common(detect_cmd);

  auto* stats_cmd = app.add_subcommand("stats", "attacker workload statistics");
  double stats_P = -1.0;
  auto* p_opt = stats_cmd->add_option("--P", stats_P, "miss probability");
  add_common(stats_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(table1)) return cmd_table1(row_specs, format, out_path);
    if (app.got_subcommand(spectrum))
      return cmd_spectrum(spec_N, spec_y, spec_l, format, out_path);
    if (app.got_subcommand(simon_cmd))
      return cmd_simon(simon_n,
                       s_opt->count() ? std::optional<std::string>(simon_s)
                                      : std::nullopt,
                       simon_trials, simon_attacked, simon_leak, seed, format,
                       out_path);
    if (app.got_subcommand(attack_cmd))
      return cmd_attack_shor(atk_N, atk_y, atk_trials, atk_leak, seed, format,
                             out_path);
    if (app.got_subcommand(detect_cmd))
      return cmd_detect(det_r, det_L, det_trials, det_attacked, seed, format,
                        out_path);
    if (app.got_subcommand(stats_cmd))
      return cmd_stats(p_opt->count() ? std::optional<double>(stats_P) : std::nullopt,
                       format, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
