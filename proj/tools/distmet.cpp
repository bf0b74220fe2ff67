// Copyright 2026 The distmet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// distmet command-line driver.
//
// Exit codes: 0 success, 1 runtime failure, 2 invalid input, 3 bound violation
// found by `verify`.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "distmet/distmet.hpp"
#include "distmet/io.hpp"

namespace {

using distmet::json;

constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;
constexpr int kExitViolation = 3;

// ---------------------------------------------------------------------------
// input parsing

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw distmet::ValidationError("not a number: '" + s + "'");
  }
}

int parse_int(const std::string& s) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw distmet::ValidationError("not an integer: '" + s + "'");
  }
}

struct ParsedStates {
  std::vector<distmet::SingleModeState> states;
  double discarded_norm = 0.0;  // 1 - Π(1 - δ_k) over truncated modes
};

// vac | fock:N | coherent:RE:IM:CUTOFF | amps:RE0:IM0:RE1:IM1:...
ParsedStates parse_states(const std::vector<std::string>& tokens) {
  if (tokens.empty()) throw distmet::ValidationError("no input states given");
  ParsedStates out;
  double kept = 1.0;
  for (const auto& tok : tokens) {
    const auto parts = split(tok, ':');
    const std::string& kind = parts.at(0);
    if (kind == "vac" && parts.size() == 1) {
      out.states.push_back(distmet::SingleModeState::vacuum());
    } else if (kind == "fock" && parts.size() == 2) {
      out.states.push_back(distmet::SingleModeState::fock(parse_int(parts[1])));
    } else if (kind == "coherent" && parts.size() == 4) {
      auto t = distmet::coherent_state({parse_double(parts[1]), parse_double(parts[2])}, parse_int(parts[3]));
      kept *= 1.0 - t.discarded_norm;
      out.states.push_back(std::move(t.state));
    } else if (kind == "amps" && parts.size() >= 3 && parts.size() % 2 == 1) {
      std::vector<distmet::Amplitude> a;
      for (std::size_t i = 1; i < parts.size(); i += 2) a.emplace_back(parse_double(parts[i]), parse_double(parts[i + 1]));
      out.states.emplace_back(std::move(a));
    } else {
      throw distmet::ValidationError("bad state token '" + tok + "' (use vac, fock:N, coherent:RE:IM:CUTOFF or amps:RE:IM:...)");
    }
  }
  out.discarded_norm = 1.0 - kept;
  return out;
}

distmet::WeightVector parse_weights(const std::vector<double>& raw, int d) {
  if (raw.empty()) {
    if (d < 1) throw distmet::ValidationError("give --weights or a positive --d");
    return distmet::WeightVector::uniform(d);
  }
  if (d > 0 && static_cast<int>(raw.size()) != d) throw distmet::ValidationError("--weights must have d entries");
  return distmet::WeightVector(raw);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw distmet::ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw distmet::ValidationError("invalid JSON in '" + path + "': " + e.what());
  }
}

distmet::ModeUnitary make_unitary(const std::string& spec, int modes, std::uint64_t seed,
                                  const std::optional<distmet::WeightVector>& w) {
  if (spec == "haar") {
    distmet::Rng rng(seed);
    return distmet::ModeUnitary::haar(modes, rng);
  }
  if (spec == "identity") return distmet::ModeUnitary::identity(modes);
  if (spec == "hoarding") {
    if (!w) throw distmet::ValidationError("hoarding unitary needs weights");
    auto u = distmet::hoarding_unitary(*w);
    if (u.dim() != modes) throw distmet::DimensionError("hoarding unitary acts on 2d modes");
    return u;
  }
  const json j = read_json_file(spec);
  auto u = j.is_array() ? distmet::ModeUnitary(distmet::recompose(distmet::gate_sequence_from_json(j, modes)))
                       : distmet::mode_unitary_from_json(j);
  if (u.dim() != modes) throw distmet::DimensionError("unitary dimension does not match the number of modes");
  return u;
}

// ---------------------------------------------------------------------------
// output

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw distmet::ValidationError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }
  void write_json(const json& j) { stream() << j.dump(2) << "\n"; }

 private:
  std::ofstream file_;
};

// ---------------------------------------------------------------------------
// --config: a flat JSON object whose keys are long option names of the
// selected command. Values fill only options not given on the command line.

CLI::App* leaf_command(CLI::App* app) {
  for (;;) {
    const auto subs = app->get_subcommands();
    if (subs.empty()) return app;
    app = subs.front();
  }
}

void apply_config(CLI::App* leaf, const std::string& path) {
  const json cfg = read_json_file(path);
  if (!cfg.is_object()) throw distmet::ValidationError("config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    CLI::Option* opt = leaf->get_option_no_throw("--" + key);
    if (!opt) throw distmet::ValidationError("unknown config key '" + key + "' for command " + leaf->get_name());
    if (opt->count() > 0) continue;
    std::vector<std::string> items;
    const auto text = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    if (value.is_array()) {
      for (const auto& v : value) items.push_back(text(v));
    } else {
      items.push_back(text(value));
    }
    opt->add_result(items);
    opt->run_callback();
  }
}

// ---------------------------------------------------------------------------
// commands

struct ProtocolArgs {
  int d = 2;
  int photons = 0;
  int n = 0;
  double w1 = 0.5;
  double w2 = 0.5;
  std::vector<double> weights;
  double q_probe = distmet::kDefaultProbe;
  double step = distmet::kDefaultStep;
  std::optional<int> cap;
  std::string out;
};

int run_twin_fock(const ProtocolArgs& a) {
  if (a.photons % 2 != 0) throw distmet::ValidationError("N must be even");
  const auto w = parse_weights(a.weights, a.d);
  const auto r = distmet::twin_fock_protocol(a.d, a.photons, w, a.q_probe, a.step, std::nullopt, a.cap);
  json j = distmet::to_json(r);
  j["formula_delta_q"] = distmet::twin_fock_formula(a.photons);
  Output(a.out).write_json(j);
  return 0;
}

int run_fig2(const ProtocolArgs& a) {
  const auto r = distmet::fig2_protocol(a.n, a.w1, a.w2, a.q_probe, a.step);
  json j = distmet::to_json(r);
  j["formula_delta_q"] = distmet::fig2_formula(a.n);
  Output(a.out).write_json(j);
  return 0;
}

int run_classical(const ProtocolArgs& a) {
  const auto w = parse_weights(a.weights, a.d);
  json j = {{"scheme", "classical"},
            {"n", a.n},
            {"d", w.d()},
            {"weights", std::vector<double>(w.values().begin(), w.values().end())},
            {"node_delta_theta", distmet::twin_fock_node_sensitivity(a.n)},
            {"delta_q", distmet::classical_baseline(a.n, w)}};
  Output(a.out).write_json(j);
  return 0;
}

struct QfiArgs {
  std::vector<std::string> states;
  std::vector<double> weights;
  std::vector<int> phase_modes;
  std::string unitary = "haar";
  std::uint64_t seed = 0;
  std::optional<int> cap;
  std::string out;
};

int run_qfi(const QfiArgs& a) {
  const auto in = parse_states(a.states);
  const int modes = static_cast<int>(in.states.size());
  const auto w = parse_weights(a.weights, a.phase_modes.empty() ? -1 : static_cast<int>(a.phase_modes.size()));
  const auto phase_modes = a.phase_modes.empty() ? distmet::default_phase_modes(w.d()) : a.phase_modes;
  const auto u = make_unitary(a.unitary, modes, a.seed, w);

  const auto psi = distmet::apply_mode_unitary(distmet::product_state(in.states, a.cap), u);
  const auto f = distmet::qfi_direct(psi, phase_modes);
  std::vector<distmet::MomentSet> moments;
  for (const auto& s : in.states) moments.push_back(distmet::single_mode_moments(s));
  const auto terms = distmet::fw_terms(u, moments, phase_modes, w);

  json j = {{"qfi", distmet::to_json(f)},
            {"fw_direct", f.weighted(w)},
            {"fw_moments", terms.fw()},
            {"terms", terms.terms},
            {"discarded_norm", in.discarded_norm}};
  try {
    j["crb_delta_q"] = distmet::crb_delta_q(f, w);
  } catch (const distmet::EstimationImpossible& e) {
    j["crb_delta_q"] = nullptr;
    j["crb_error"] = e.what();
  }
  Output(a.out).write_json(j);
  return 0;
}

struct BoundArgs {
  std::vector<int> photons;
  std::vector<std::string> states;
  std::vector<double> weights;
  int d = -1;
  std::string unitary;
  std::uint64_t seed = 0;
  std::string out;
};

int run_bound_fock(const BoundArgs& a) {
  if (a.photons.empty()) throw distmet::ValidationError("--photons is required");
  const auto w = parse_weights(a.weights, a.d);
  const auto eb = distmet::fock_eigenvalue_bound(a.photons, w);
  json j = {{"photons", a.photons},
            {"weights", std::vector<double>(w.values().begin(), w.values().end())},
            {"pairing_bound", eb.pairing},
            {"closed_form_bound", eb.closed_form},
            {"eigenvalue_bound", eb.value},
            {"fock_delta_q", distmet::fock_delta_q_bound(a.photons, w)}};
  if (!a.unitary.empty()) {
    const auto u = make_unitary(a.unitary, static_cast<int>(a.photons.size()), a.seed, w);
    j["trace_bound"] = distmet::fock_trace_bound(u, w, a.photons);
  }
  Output(a.out).write_json(j);
  return 0;
}

int run_bound_separable(const BoundArgs& a) {
  const auto in = parse_states(a.states);
  const auto w = parse_weights(a.weights, a.d);
  std::vector<distmet::MomentSet> moments;
  for (const auto& s : in.states) moments.push_back(distmet::single_mode_moments(s));
  const auto k = distmet::separable_bound_constants(moments);
  json j = {{"alpha_max", k.alpha_max}, {"n_max", k.n_max},     {"xi_max", k.xi_max},
            {"beta_max", k.beta_max},   {"v_max", k.v_max},     {"M_max", k.pair_n_max},
            {"Xi_max", k.pair_xi_max},  {"m_max", k.m_max},     {"A", k.a},
            {"B", k.b},                 {"C", k.c},             {"fw_bound", distmet::separable_fw_bound(k, w)},
            {"discarded_norm", in.discarded_norm}};
  if (k.m_max > 0.0) {
    j["simplified_delta_q"] = distmet::simplified_delta_q_bound(k, w.d());
    j["weighted_delta_q"] = distmet::separable_delta_q_bound(k, w);
  }
  if (!a.unitary.empty()) {
    const auto u = make_unitary(a.unitary, static_cast<int>(in.states.size()), a.seed, w);
    const auto report = distmet::verify_term_bounds(u, moments, w);
    json terms = json::array();
    for (const auto& t : report.terms) terms.push_back({{"value", t.value}, {"bound", t.bound}, {"pass", t.pass}});
    j["terms"] = terms;
    j["fw"] = report.fw;
    j["all_pass"] = report.all_pass();
  }
  Output(a.out).write_json(j);
  return 0;
}

struct VerifyArgs {
  std::string family = "fock";
  long long instances = 500;
  std::uint64_t seed = 0;
  std::string out;
};

int run_verify(const VerifyArgs& a) {
  if (a.instances <= 0) throw distmet::ValidationError("--instances must be positive");
  const auto family = a.family == "fock"        ? distmet::CampaignFamily::kFock
                      : a.family == "separable" ? distmet::CampaignFamily::kSeparable
                                                : throw distmet::ValidationError("unknown family '" + a.family + "'");
  Output out(a.out);
  const auto s = distmet::run_campaign(family, a.seed, static_cast<std::size_t>(a.instances), &out.stream());
  std::cerr << a.family << ": " << s.instances << " instances, " << s.violations << " violations\n";
  return s.violations == 0 ? 0 : kExitViolation;
}

struct OptimizeArgs {
  std::vector<std::string> states;
  std::string family;
  int d = -1;
  int per_node = 1;
  std::vector<double> weights;
  std::size_t budget = 4000;
  int restarts = 20;
  std::uint64_t seed = 0;
  std::string layout = "triangular";
  bool warm_hoarding = false;
  std::string out;
};

int run_optimize(const OptimizeArgs& a) {
  std::vector<distmet::SingleModeState> states;
  int d = a.d;
  if (!a.family.empty()) {
    if (!a.states.empty()) throw distmet::ValidationError("give either --states or --family");
    if (d < 1) throw distmet::ValidationError("--family needs --d");
    const auto fam = a.family == "hoarded"            ? distmet::ScalingFamily::kHoarded
                     : a.family == "well-distributed" ? distmet::ScalingFamily::kWellDistributed
                                                      : throw distmet::ValidationError("unknown family '" + a.family + "'");
    for (int k : distmet::scaling_input(fam, d, a.per_node)) states.push_back(distmet::SingleModeState::fock(k));
  } else {
    states = parse_states(a.states).states;
  }
  const auto w = parse_weights(a.weights, d);
  const int modes = static_cast<int>(states.size());
  const auto layout = a.layout == "triangular" ? distmet::triangular_layout(modes)
                                               : distmet::gate_sequence_from_json(read_json_file(a.layout), modes);
  distmet::OptimizerOptions opts;
  opts.budget = a.budget;
  opts.restarts = a.restarts;
  opts.seed = a.seed;
  if (a.warm_hoarding) {
    if (a.layout != "triangular" || modes != 2 * w.d()) {
      throw distmet::ValidationError("--warm-hoarding needs the triangular layout on 2d modes");
    }
    opts.warm_start = distmet::hoarding_warm_start(w);
  }
  const auto report = distmet::maximize_fw(states, w, layout, opts);
  Output(a.out).write_json(distmet::to_json(report));
  return 0;
}

struct SweepArgs {
  std::string kind = "protocol";
  std::vector<int> ds = {2, 3};
  std::vector<int> ns = {2, 4, 6};
  std::string family = "hoarded";
  int per_node = 1;
  std::size_t budget = 4000;
  int restarts = 20;
  std::uint64_t seed = 0;
  std::string out;
};

int run_sweep(const SweepArgs& a) {
  Output out(a.out);
  if (a.kind == "protocol") {
    distmet::write_protocol_sweep(out.stream(), distmet::protocol_sweep(a.ds, a.ns));
    return 0;
  }
  if (a.kind != "scaling") throw distmet::ValidationError("unknown sweep kind '" + a.kind + "'");
  const auto fam = a.family == "hoarded"            ? distmet::ScalingFamily::kHoarded
                   : a.family == "well-distributed" ? distmet::ScalingFamily::kWellDistributed
                                                    : throw distmet::ValidationError("unknown family '" + a.family + "'");
  distmet::OptimizerOptions opts;
  opts.budget = a.budget;
  opts.restarts = a.restarts;
  opts.seed = a.seed;
  distmet::CsvWriter csv(out.stream());
  csv.row({"family", "d", "photons", "best_fw", "bound", "closed_form", "witness_fw", "implied_delta_q",
           "fock_delta_q", "violations"});
  for (int d : a.ds) {
    const auto r = distmet::scaling_point(fam, d, a.per_node, opts);
    csv.row({distmet::to_string(r.family), std::to_string(r.d), std::to_string(r.photons),
             distmet::format_double(r.best_fw), distmet::format_double(r.bound), distmet::format_double(r.closed_form),
             distmet::format_double(r.witness_fw), distmet::format_double(r.implied_delta_q),
             distmet::format_double(r.fock_delta_q), std::to_string(r.violations)});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distmet: distributed phase metrology through linear-optical networks"};
  app.require_subcommand(1);
  std::string config;
  app.add_option("--config", config, "JSON file of option values; command-line flags take precedence");

  // protocol
  ProtocolArgs pa;
  auto* protocol = app.add_subcommand("protocol", "simulate an estimation strategy");
  protocol->require_subcommand(1);
  auto* twin = protocol->add_subcommand("twin-fock", "hoarded twin-Fock scheme on 2d modes");
  twin->add_option("--d", pa.d, "number of phases");
  twin->add_option("--N", pa.photons, "total photons (even)");
  twin->add_option("--weights", pa.weights, "weights, max |w| = 1/d")->delimiter(',');
  twin->add_option("--q-probe", pa.q_probe);
  twin->add_option("--step", pa.step);
  twin->add_option("--cap", pa.cap, "total-photon cap");
  twin->add_option("--out", pa.out);
  auto* fig2 = protocol->add_subcommand("fig2", "three-mode single-reference-port circuit");
  fig2->add_option("--n", pa.n, "photons per input port");
  fig2->add_option("--w1", pa.w1);
  fig2->add_option("--w2", pa.w2);
  fig2->add_option("--q-probe", pa.q_probe);
  fig2->add_option("--step", pa.step);
  fig2->add_option("--out", pa.out);
  auto* classical = protocol->add_subcommand("classical", "independent per-node twin-Fock estimation");
  classical->add_option("--n", pa.n, "photons per node (even)");
  classical->add_option("--d", pa.d);
  classical->add_option("--weights", pa.weights)->delimiter(',');
  classical->add_option("--out", pa.out);

  // qfi
  QfiArgs qa;
  auto* qfi = app.add_subcommand("qfi", "Fisher matrix of a product input after a network");
  qfi->add_option("--states", qa.states, "per-mode states: vac, fock:N, coherent:RE:IM:CUTOFF, amps:RE:IM:...")->delimiter(',');
  qfi->add_option("--weights", qa.weights)->delimiter(',');
  qfi->add_option("--phase-modes", qa.phase_modes)->delimiter(',');
  qfi->add_option("--unitary", qa.unitary, "haar, identity, hoarding, or a JSON file");
  qfi->add_option("--seed", qa.seed);
  qfi->add_option("--cap", qa.cap);
  qfi->add_option("--out", qa.out);

  // bound
  BoundArgs ba;
  auto* bound = app.add_subcommand("bound", "closed-form bounds");
  bound->require_subcommand(1);
  auto* bfock = bound->add_subcommand("fock", "Fock-input bounds");
  bfock->add_option("--photons", ba.photons)->delimiter(',');
  bfock->add_option("--weights", ba.weights)->delimiter(',');
  bfock->add_option("--d", ba.d);
  bfock->add_option("--unitary", ba.unitary, "also evaluate the trace bound for this unitary");
  bfock->add_option("--seed", ba.seed);
  bfock->add_option("--out", ba.out);
  auto* bsep = bound->add_subcommand("separable", "product-input bound constants");
  bsep->add_option("--states", ba.states)->delimiter(',');
  bsep->add_option("--weights", ba.weights)->delimiter(',');
  bsep->add_option("--d", ba.d);
  bsep->add_option("--unitary", ba.unitary, "also report the six term bounds for this unitary");
  bsep->add_option("--seed", ba.seed);
  bsep->add_option("--out", ba.out);

  // verify
  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "seeded bound-verification campaign");
  verify->add_option("--family", va.family, "fock or separable");
  verify->add_option("--instances", va.instances);
  verify->add_option("--seed", va.seed);
  verify->add_option("--out", va.out, "CSV path (default stdout)");

  // optimize
  OptimizeArgs oa;
  auto* optimize = app.add_subcommand("optimize", "maximize F_w over a gate mesh");
  optimize->add_option("--states", oa.states)->delimiter(',');
  optimize->add_option("--family", oa.family, "hoarded or well-distributed");
  optimize->add_option("--d", oa.d);
  optimize->add_option("--per-node", oa.per_node);
  optimize->add_option("--weights", oa.weights)->delimiter(',');
  optimize->add_option("--budget", oa.budget, "evaluations per restart");
  optimize->add_option("--restarts", oa.restarts);
  optimize->add_option("--seed", oa.seed);
  optimize->add_option("--layout", oa.layout, "triangular or a JSON gate-sequence file");
  optimize->add_flag("--warm-hoarding", oa.warm_hoarding, "start restart 0 at the hoarding unitary");
  optimize->add_option("--out", oa.out);

  // sweep
  SweepArgs sa;
  auto* sweep = app.add_subcommand("sweep", "tables over d and N");
  sweep->add_option("--kind", sa.kind, "protocol or scaling");
  sweep->add_option("--d", sa.ds)->delimiter(',');
  sweep->add_option("--N", sa.ns)->delimiter(',');
  sweep->add_option("--family", sa.family);
  sweep->add_option("--per-node", sa.per_node);
  sweep->add_option("--budget", sa.budget);
  sweep->add_option("--restarts", sa.restarts);
  sweep->add_option("--seed", sa.seed);
  sweep->add_option("--out", sa.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (!config.empty()) apply_config(leaf_command(&app), config);
    if (twin->parsed()) return run_twin_fock(pa);
    if (fig2->parsed()) return run_fig2(pa);
    if (classical->parsed()) return run_classical(pa);
    if (qfi->parsed()) return run_qfi(qa);
    if (bfock->parsed()) return run_bound_fock(ba);
    if (bsep->parsed()) return run_bound_separable(ba);
    if (verify->parsed()) return run_verify(va);
    if (optimize->parsed()) return run_optimize(oa);
    if (sweep->parsed()) return run_sweep(sa);
  } catch (const distmet::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
