// Copyright 2026 The hyperifs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment runner. One experiment per invocation; the report JSON goes to
// stdout and, with --out, to <dir>/report.json next to CSV/SVG artifacts.
// Exit status 0 covers every completed run, including runs whose finding is
// "the property fails"; nonzero is reserved for inputs the run never got
// past. CSV column schemas are documented in the README.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyperifs/hyperifs.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnreadable = 2;
constexpr int kExitUnknownSystem = 3;
constexpr int kExitBadParameter = 4;
constexpr int kExitVerifyFailed = 5;

using hyperifs::Json;

struct RunOptions {
  std::string system;
  std::string experiment;
  double eps = 0.05;
  double delta = 0.0;
  int resolution = 0;
  int horizon = 0;
  int max_word_len = 60;
  int trials = 20;
  std::uint64_t seed = 1;
  std::string out;
};

bool is_corpus_name(const std::string& s) {
  auto names = hyperifs::corpus_names();
  return std::find(names.begin(), names.end(), s) != names.end();
}

hyperifs::IfsSystem load_target_system(const RunOptions& opt) {
  if (is_corpus_name(opt.system))
    return hyperifs::make_system(opt.system, opt.resolution);
  if (!std::filesystem::exists(opt.system))
    throw std::out_of_range("unknown system: " + opt.system);
  hyperifs::IfsSystem sys =
      hyperifs::system_from_json(hyperifs::load_json(opt.system));
  return hyperifs::with_resolution(sys, opt.resolution);
}

Json set_summary(const hyperifs::CompactSet& a) {
  Json j = hyperifs::set_to_json(a);
  j["count"] = a.count();
  return j;
}

void emit(const RunOptions& opt, const Json& report) {
  std::string text = report.dump(2) + "\n";
  std::fputs(text.c_str(), stdout);
  if (!opt.out.empty())
    hyperifs::save_text(opt.out + "/report.json", text);
}

Json report_envelope(const RunOptions& opt, const hyperifs::IfsSystem& sys) {
  Json j;
  j["experiment"] = opt.experiment;
  Json sj = hyperifs::system_to_json(sys);
  j["system"] = {{"name", sys.name}, {"hash", hyperifs::config_hash(sj)}};
  j["resolution"] = sys.space.resolution();
  j["eps"] = opt.eps;
  j["seed"] = opt.seed;
  return j;
}

// d_H(F^j(seed), X) traces for a deterministic seed family, plus the
// constructive bound and its certificate when an attracting fixed point
// exists. Seed cell 0 comes first so its hitting time is easy to read off.
int run_attractor(const RunOptions& opt) {
  hyperifs::IfsSystem sys = load_target_system(opt);
  const hyperifs::GridSpace& s = sys.space;
  int n = s.resolution();
  Json report = report_envelope(opt, sys);

  std::optional<hyperifs::AttractingFixedPoint> afp;
  for (std::size_t g = 0; g < sys.generators.size() && !afp; ++g)
    afp = hyperifs::find_attracting_fixed_point(s, sys.generators[g], int(g));

  int horizon = opt.horizon;
  Json bound_json;
  if (afp) {
    hyperifs::ConvergenceBound bound =
        hyperifs::convergence_time_bound(sys, *afp, opt.eps, opt.max_word_len);
    bound_json["found"] = bound.found;
    if (bound.found) {
      bound_json["N"] = bound.N;
      bound_json["k_U"] = bound.k_U;
      bound_json["n0"] = bound.n0;
      bound_json["s_eps"] = bound.s_eps;
      if (horizon <= 0) horizon = 4 * bound.N;
      if (!opt.out.empty())
        hyperifs::save_json(opt.out + "/certificate.json",
                            hyperifs::certificate_to_json(sys, *afp, bound));
    } else {
      bound_json["failure"] = bound.failure;
    }
  } else {
    bound_json["found"] = false;
    bound_json["failure"] = "no attracting fixed point among the generators";
  }
  report["bound"] = bound_json;
  if (horizon <= 0) horizon = 80;
  report["horizon"] = horizon;

  std::vector<hyperifs::CompactSet> seeds;
  Json seed_json = Json::array();
  for (int c : {0, n / 4, n / 2, (3 * n) / 4, n - 1}) {
    seeds.push_back(hyperifs::CompactSet::of_cell(s, c));
    seed_json.push_back(Json{{"cell", c}});
  }
  double fat_center = s.center(n / 3), fat_radius = 10 * s.cell_diameter();
  seeds.push_back(hyperifs::CompactSet::ball(s, fat_center, fat_radius));
  seed_json.push_back(Json{{"ball_center", fat_center}, {"ball_radius", fat_radius}});

  hyperifs::ConvergenceReport conv = hyperifs::attractor_convergence(
      sys, hyperifs::CompactSet::full(s), seeds, opt.eps, horizon);
  for (std::size_t k = 0; k < conv.seeds.size(); ++k) {
    seed_json[k]["first_hit"] = conv.seeds[k].first_hit;
    seed_json[k]["tail_ok"] = conv.seeds[k].tail_ok;
    seed_json[k]["max_after_hit"] = conv.seeds[k].max_after_hit;
  }
  report["seeds"] = seed_json;
  report["all_converged"] = conv.all_converged();
  report["max_first_hit"] = conv.max_first_hit();

  if (!opt.out.empty()) {
    std::vector<std::string> header{"j"};
    for (std::size_t k = 0; k < conv.seeds.size(); ++k)
      header.push_back("dh_seed" + std::to_string(k));
    std::vector<std::vector<double>> rows;
    for (int j = 0; j <= horizon; ++j) {
      std::vector<double> row{double(j)};
      for (const auto& sc : conv.seeds) row.push_back(sc.trace[std::size_t(j)]);
      rows.push_back(std::move(row));
    }
    hyperifs::write_csv(opt.out + "/trace.csv", header, rows);
    std::vector<std::vector<double>> series;
    for (const auto& sc : conv.seeds) series.push_back(sc.trace);
    hyperifs::save_text(
        opt.out + "/trace.svg",
        hyperifs::svg_trace(series, "d_H(F^j seed, X) vs j", opt.eps));
    hyperifs::HyperOrbit orb =
        hyperifs::iterate(sys, seeds[0], std::min(horizon, 48));
    hyperifs::save_text(opt.out + "/filmstrip.svg",
                        hyperifs::svg_filmstrip(orb.sets, "orbit of seed {0}"));
  }
  emit(opt, report);
  return kExitOk;
}

int run_equicontinuity(const RunOptions& opt) {
  hyperifs::IfsSystem sys = load_target_system(opt);
  int horizon = opt.horizon > 0 ? opt.horizon : 100;
  hyperifs::EquicontinuityProbe probe = hyperifs::hyperspace_equicontinuity_probe(
      sys, opt.eps, opt.trials, horizon, opt.seed);
  Json report = report_envelope(opt, sys);
  report["horizon"] = horizon;
  report["trials"] = opt.trials;
  report["delta_found"] = probe.delta_found;
  report["equicontinuous_at_scale"] = probe.delta_found > 0;
  report["ladder"] = probe.ladder;
  Json wl = Json::array();
  for (const auto& w : probe.witnesses) {
    Json wj{{"delta", w.delta},
            {"d_start", w.d_start},
            {"d_f", w.d_f},
            {"at_index", w.at_index}};
    if (&w == &probe.witnesses.front()) {
      wj["a"] = set_summary(w.a);
      wj["b"] = set_summary(w.b);
    }
    wl.push_back(std::move(wj));
  }
  report["witnesses"] = wl;
  if (!opt.out.empty()) {
    std::vector<std::vector<double>> rows;
    for (double d : probe.ladder)
      rows.push_back({d, d <= probe.delta_found ? 1.0 : 0.0});
    hyperifs::write_csv(opt.out + "/ladder.csv", {"delta", "accepted"}, rows);
  }
  emit(opt, report);
  return kExitOk;
}

int run_minimality(const RunOptions& opt) {
  hyperifs::IfsSystem sys = load_target_system(opt);
  double radius = opt.delta > 0 ? opt.delta : opt.eps;
  hyperifs::MinimalityProbe probe = hyperifs::minimality_probe(
      sys, radius, opt.max_word_len, opt.trials);
  Json report = report_envelope(opt, sys);
  report["ball_radius"] = probe.ball_radius;
  report["minimal_up_to_resolution"] = probe.minimal_up_to_resolution;
  report["balls_checked"] = probe.balls_checked;
  report["max_k_U"] = probe.max_k_U;
  if (probe.failing_ball)
    report["failing_ball"] = set_summary(*probe.failing_ball);
  emit(opt, report);
  return kExitOk;
}

int run_pointwise(const RunOptions& opt) {
  hyperifs::IfsSystem sys = load_target_system(opt);
  const hyperifs::GridSpace& s = sys.space;
  int n = s.resolution();
  int count = std::max(1, opt.trials);
  int max_len = std::min(opt.max_word_len, 24);
  Json report = report_envelope(opt, sys);
  Json points = Json::array();
  int equi = 0, sens = 0;
  std::vector<std::vector<double>> rows;
  for (int k = 0; k < count; ++k) {
    double x = s.center((k * n) / count + n / (2 * count));
    hyperifs::PointVerdict v =
        hyperifs::classify_point(sys, x, opt.eps, max_len, 24);
    Json pj{{"x", v.x},
            {"delta_found", v.delta_found},
            {"samples_checked", v.samples_checked}};
    if (v.witness) {
      pj["witness"] = {{"y", v.witness->y},
                       {"separation", v.witness->separation},
                       {"word_length", v.witness->word.length()}};
      ++sens;
    } else {
      ++equi;
    }
    points.push_back(std::move(pj));
    rows.push_back({v.x, v.delta_found});
  }
  report["points"] = points;
  report["equicontinuous_points"] = equi;
  report["sensitive_points"] = sens;
  hyperifs::SensitivityProbe probe =
      hyperifs::sensitivity_probe(sys, opt.eps, max_len);
  report["sensitivity_probe"] = {{"sensitive", probe.sensitive},
                                 {"min_open_diameter", probe.min_open_diameter},
                                 {"balls_checked", probe.balls_checked}};
  if (!opt.out.empty())
    hyperifs::write_csv(opt.out + "/points.csv", {"x", "delta_found"}, rows);
  emit(opt, report);
  return kExitOk;
}

int run_shadowing(const RunOptions& opt) {
  hyperifs::IfsSystem sys = load_target_system(opt);
  const hyperifs::GridSpace& s = sys.space;
  int n = s.resolution();
  int length = opt.horizon > 0 ? opt.horizon : 500;
  Json report = report_envelope(opt, sys);
  double delta = opt.delta;
  if (delta <= 0) {
    hyperifs::DeltaSchedule sched =
        hyperifs::derive_delta_schedule(sys, opt.eps, 60, 4, opt.seed);
    if (!sched.found) {
      report["schedule"] = {{"found", false}, {"attempts", sched.attempts}};
      emit(opt, report);
      return kExitOk;
    }
    delta = sched.delta;
    report["schedule"] = {{"found", true},
                          {"attempts", sched.attempts},
                          {"window", sched.window}};
  }
  report["delta"] = delta;
  report["length"] = length;

  const hyperifs::Perturbation kinds[] = {
      hyperifs::Perturbation::Dilate, hyperifs::Perturbation::Erode,
      hyperifs::Perturbation::Jitter, hyperifs::Perturbation::Adversarial};
  Json trials = Json::array();
  bool all_shadowed = true;
  std::optional<std::size_t> first_shadowed;
  std::vector<hyperifs::PseudoOrbit> orbits;
  std::vector<hyperifs::ShadowingReport> verdicts;
  for (int t = 0; t < opt.trials; ++t) {
    hyperifs::Rng rng = hyperifs::Rng::fork(opt.seed, std::uint64_t(t));
    hyperifs::CompactSet seed_set = hyperifs::CompactSet::ball(
        s, s.center(int(rng.below(std::uint64_t(n)))),
        3 * s.cell_diameter());
    hyperifs::PseudoOrbit po = hyperifs::generate_pseudo_orbit(
        sys, seed_set, length, delta, kinds[t % 4], opt.seed + 1000 + t);
    hyperifs::ShadowingReport rep =
        hyperifs::infinite_shadowing_test(sys, po, opt.eps, 10, opt.seed);
    Json tj{{"kind", hyperifs::to_string(po.kind)},
            {"max_defect", po.max_defect()},
            {"shadowed", rep.shadowed},
            {"split_index", rep.split_index},
            {"head_error", rep.head_error},
            {"tail_error", rep.tail_error},
            {"max_tracking_error", rep.max_tracking_error}};
    if (!rep.failure.empty()) tj["failure"] = rep.failure;
    trials.push_back(std::move(tj));
    all_shadowed = all_shadowed && rep.shadowed;
    if (rep.shadowed && !first_shadowed) first_shadowed = orbits.size();
    orbits.push_back(std::move(po));
    verdicts.push_back(std::move(rep));
  }
  report["trials"] = trials;
  report["all_shadowed"] = all_shadowed;

  if (!opt.out.empty() && first_shadowed) {
    const hyperifs::PseudoOrbit& po = orbits[*first_shadowed];
    const hyperifs::ShadowingReport& rep = verdicts[*first_shadowed];
    hyperifs::HyperOrbit truth =
        hyperifs::iterate(sys, *rep.shadow_seed, int(po.sets.size()) - 1);
    std::vector<std::vector<double>> rows;
    std::vector<double> trace;
    for (std::size_t i = 0; i < po.sets.size(); ++i) {
      double d = hyperifs::hausdorff(truth.sets[i], po.sets[i]);
      rows.push_back({double(i), d});
      trace.push_back(d);
    }
    hyperifs::write_csv(opt.out + "/tracking.csv", {"i", "dh_true_vs_pseudo"},
                        rows);
    hyperifs::save_text(
        opt.out + "/tracking.svg",
        hyperifs::svg_trace({trace}, "tracking error of the shadow", opt.eps));
  }
  emit(opt, report);
  return kExitOk;
}

int run_symbolic(const RunOptions& opt) {
  hyperifs::IfsSystem sys = load_target_system(opt);
  const hyperifs::GridSpace& s = sys.space;
  if (s.kind() != hyperifs::SpaceKind::ShiftSpace)
    throw std::invalid_argument(
        "symbolic experiment requires a shift-space system");
  Json report = report_envelope(opt, sys);

  int cyl_depth = std::min(7, s.depth() - 2);
  hyperifs::ShiftSensitivityReport sens =
      hyperifs::verify_shift_sensitive(s, cyl_depth);
  report["shift_sensitive"] = {
      {"sensitive_on_all", sens.sensitive_on_all},
      {"sensitivity_constant", sens.sensitivity_constant},
      {"max_cylinder_depth", sens.max_cylinder_depth},
      {"cylinders_checked", sens.cylinders_checked}};

  bool has_prepend = false;
  for (const auto& g : sys.generators)
    has_prepend = has_prepend || g.kind == hyperifs::MapKind::SymbolPrepend;
  if (has_prepend) {
    int word_depth = std::min(opt.max_word_len, 8);
    hyperifs::PrependEquicontinuityReport eq =
        hyperifs::verify_prepend_equicontinuous(sys, word_depth, opt.eps);
    report["prepend_equicontinuous"] = {{"exact", eq.exact},
                                        {"delta_equals_eps", eq.delta_is_eps},
                                        {"max_ratio", eq.max_ratio},
                                        {"word_depth", eq.word_depth},
                                        {"pairs_checked", eq.pairs_checked}};
    hyperifs::LeftInverseReport li = hyperifs::verify_left_inverse(s, 2);
    report["left_inverse"] = {{"within_resolution", li.within_resolution},
                              {"max_deviation", li.max_deviation},
                              {"points_checked", li.points_checked}};
    hyperifs::RoundTripReport rt =
        hyperifs::verify_set_round_trip(sys, opt.trials, opt.seed);
    report["set_round_trip"] = {{"superset", rt.superset},
                                {"sets_checked", rt.sets_checked}};
  }
  emit(opt, report);
  return kExitOk;
}

int dispatch_run(const RunOptions& opt) {
  if (!opt.out.empty()) std::filesystem::create_directories(opt.out);
  if (opt.experiment == "attractor") return run_attractor(opt);
  if (opt.experiment == "equicontinuity") return run_equicontinuity(opt);
  if (opt.experiment == "minimality") return run_minimality(opt);
  if (opt.experiment == "pointwise") return run_pointwise(opt);
  if (opt.experiment == "shadowing") return run_shadowing(opt);
  if (opt.experiment == "symbolic") return run_symbolic(opt);
  throw std::invalid_argument("unknown experiment: " + opt.experiment);
}

int dispatch_verify(const std::string& path, int resolution) {
  Json cert = hyperifs::load_json(path);
  hyperifs::CertificateCheck check =
      hyperifs::verify_certificate_json(cert, resolution);
  Json report{{"ok", check.ok},
              {"resolution", check.resolution},
              {"slack", check.slack},
              {"failures", check.failures}};
  std::string text = report.dump(2) + "\n";
  std::fputs(text.c_str(), stdout);
  return check.ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"iterated function system experiments on grid hyperspaces"};
  app.require_subcommand(1);

  RunOptions opt;
  CLI::App* run = app.add_subcommand("run", "run one experiment");
  run->add_option("--system", opt.system, "corpus name or config JSON path")
      ->required();
  run->add_option("--experiment", opt.experiment,
                  "attractor|equicontinuity|minimality|pointwise|shadowing|"
                  "symbolic")
      ->required();
  run->add_option("--eps", opt.eps, "target closeness scale");
  run->add_option("--delta", opt.delta,
                  "perturbation scale or ball radius (0 = derive)");
  run->add_option("--resolution", opt.resolution,
                  "grid resolution override (0 = system default)");
  run->add_option("--horizon", opt.horizon,
                  "iterate count or pseudo-orbit length (0 = auto)");
  run->add_option("--max-word-len", opt.max_word_len, "word search depth cap");
  run->add_option("--trials", opt.trials, "sample count");
  run->add_option("--seed", opt.seed, "random seed (recorded in the report)");
  run->add_option("--out", opt.out, "artifact output directory");

  std::string cert_path;
  int cert_resolution = 0;
  CLI::App* verify = app.add_subcommand(
      "verify-certificate", "recompute a stored certificate's claims");
  verify->add_option("path", cert_path, "certificate JSON path")->required();
  verify->add_option("--resolution", cert_resolution,
                     "verify on this grid instead of the stored one");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return dispatch_run(opt);
    return dispatch_verify(cert_path, cert_resolution);
  } catch (const Json::exception& e) {
    std::fprintf(stderr, "error: malformed input: %s\n", e.what());
    return kExitUnreadable;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUnknownSystem;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: parameter out of range: %s\n", e.what());
    return kExitBadParameter;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUnreadable;
  }
}
