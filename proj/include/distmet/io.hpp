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

#pragma once

// JSON encodings. Matrices are row-major.

#include <json.hpp>

#include <string>
#include <vector>

#include "distmet/campaign.hpp"
#include "distmet/error.hpp"
#include "distmet/fock.hpp"
#include "distmet/network.hpp"
#include "distmet/optimizer.hpp"
#include "distmet/protocols.hpp"
#include "distmet/qfi.hpp"

namespace distmet {

using json = nlohmann::ordered_json;

/// {"modes", "cap", "amps": [[occupation, re, im], ...]} in basis order. A
/// non-zero discarded norm is appended so truncation is never silent.
inline json to_json(const FockState& s, double discarded_norm = 0.0) {
  json amps = json::array();
  for (const auto& [occ, amp] : s.entries()) amps.push_back(json::array({occ, amp.real(), amp.imag()}));
  json j = {{"modes", s.mode_count()}, {"cap", s.cap()}, {"amps", amps}};
  if (discarded_norm > 0.0) j["discarded_norm"] = discarded_norm;
  return j;
}

inline FockState fock_state_from_json(const json& j) {
  std::vector<FockState::Entry> entries;
  for (const auto& e : j.at("amps")) {
    if (!e.is_array() || e.size() != 3) throw ValidationError("amps entries are [occupation, re, im]");
    entries.emplace_back(e.at(0).get<Occupation>(), Amplitude(e.at(1).get<double>(), e.at(2).get<double>()));
  }
  return FockState(j.at("modes").get<int>(), j.at("cap").get<int>(), std::move(entries));
}

inline json to_json(const ModeUnitary& u) {
  json re = json::array(), im = json::array();
  for (int r = 0; r < u.dim(); ++r) {
    json rr = json::array(), ri = json::array();
    for (int c = 0; c < u.dim(); ++c) {
      rr.push_back(u(r, c).real());
      ri.push_back(u(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return {{"dim", u.dim()}, {"re", re}, {"im", im}};
}

inline ModeUnitary mode_unitary_from_json(const json& j) {
  const auto n = j.at("dim").get<Eigen::Index>();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (n < 1 || static_cast<Eigen::Index>(re.size()) != n || static_cast<Eigen::Index>(im.size()) != n) {
    throw ValidationError("unitary needs dim rows in both re and im");
  }
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& a = re.at(static_cast<std::size_t>(r));
    const auto& b = im.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(a.size()) != n || static_cast<Eigen::Index>(b.size()) != n) {
      throw ValidationError("unitary matrix must be square");
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto k = static_cast<std::size_t>(c);
      m(r, c) = {a.at(k).get<double>(), b.at(k).get<double>()};
    }
  }
  return ModeUnitary(std::move(m));
}

/// Array of tagged gate records.
inline json to_json(const GateSequence& seq) {
  json gates = json::array();
  for (const auto& g : seq.gates()) {
    if (const auto* bs = std::get_if<BeamSplitterGate>(&g)) {
      gates.push_back({{"type", "beam_splitter"},
                       {"i", bs->i},
                       {"j", bs->j},
                       {"transmissivity", bs->transmissivity},
                       {"phase", bs->phase}});
    } else {
      const auto& ph = std::get<PhaseGate>(g);
      gates.push_back({{"type", "phase"}, {"mode", ph.mode}, {"theta", ph.theta}});
    }
  }
  return gates;
}

inline GateSequence gate_sequence_from_json(const json& j, int modes) {
  if (!j.is_array()) throw ValidationError("gate sequence must be a JSON array");
  GateSequence seq(modes);
  for (const auto& g : j) {
    const auto type = g.at("type").get<std::string>();
    if (type == "beam_splitter") {
      seq.push_back(BeamSplitterGate{g.at("i").get<int>(), g.at("j").get<int>(), g.value("transmissivity", 1.0),
                                     g.value("phase", 0.0)});
    } else if (type == "phase") {
      seq.push_back(PhaseGate{g.at("mode").get<int>(), g.value("theta", 0.0)});
    } else {
      throw ValidationError("unknown gate type '" + type + "'");
    }
  }
  return seq;
}

inline json to_json(const QfiMatrix& f) {
  json rows = json::array();
  for (int r = 0; r < f.d(); ++r) {
    json row = json::array();
    for (int c = 0; c < f.d(); ++c) row.push_back(f.entries()(r, c));
    rows.push_back(row);
  }
  std::vector<double> eig(f.eigenvalues().data(), f.eigenvalues().data() + f.d());
  return {{"d", f.d()}, {"entries", rows}, {"eigenvalues", eig}, {"support_threshold", f.support_threshold()}};
}

inline json to_json(const ProtocolResult& r) {
  const auto& m = r.metadata;
  return {{"expected_O", r.expected_O},
          {"delta_q", r.delta_q},
          {"q_eval", r.q_eval},
          {"derivative_estimate", r.derivative_estimate},
          {"metadata",
           {{"scheme", m.scheme},
            {"d", m.d},
            {"photons", m.photons},
            {"modes", m.modes},
            {"weights", m.weights},
            {"theta", m.theta},
            {"step", m.step},
            {"discarded_norm", 0.0}}}};
}

inline json to_json(const OptimizationReport& r) {
  return {{"best_fw", r.best_fw},
          {"bound_value", r.bound_value},
          {"bound_kind", r.bound_kind},
          {"gap", r.gap},
          {"iterations", r.iterations},
          {"evaluations", r.evaluations},
          {"seed", r.seed},
          {"best_restart", r.best_restart},
          {"violations", r.violations},
          {"best_params",
           {{"angles", r.best_params.angles()},
            {"modes", r.best_params.layout().modes()},
            {"layout", to_json(r.best_params.layout())},
            {"sequence", to_json(r.best_params.sequence())}}}};
}

inline json to_json(const ScalingRow& r) {
  return {{"family", to_string(r.family)},
          {"d", r.d},
          {"photons", r.photons},
          {"best_fw", r.best_fw},
          {"bound", r.bound},
          {"closed_form", r.closed_form},
          {"witness_fw", r.witness_fw},
          {"implied_delta_q", r.implied_delta_q},
          {"fock_delta_q", r.fock_delta_q},
          {"violations", r.violations}};
}

}  // namespace distmet
