#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nbgate/format.hpp"
#include "nbgate/jet.hpp"
#include "nbgate/matrix.hpp"

namespace nbgate {

inline constexpr double pi = std::numbers::pi;

// A composite rotation: N phase-shifted XX segments with fixed nominal
// angles. For N >= 3 the layout is (pi/4, pi/2, ..., pi/2, pi/4) with an odd
// number of pi/2 segments; the single-segment case carries the target angle
// itself. The common deviation enters every segment as theta_k(1+eps).
struct CompositeSequence {
  double target_angle = 0.0;            // radians
  std::vector<double> segment_angles;   // nominal theta_k, radians
  std::vector<double> phases;           // phi_k, radians

  int size() const { return static_cast<int>(phases.size()); }

  void validate() const {
    const std::size_t n = phases.size();
    if (n == 0 || n % 2 == 0) throw std::invalid_argument("segment count must be odd and positive");
    if (segment_angles.size() != n) throw std::invalid_argument("segment/phase count mismatch");
    if (!std::isfinite(target_angle)) throw std::invalid_argument("target angle must be finite");
    for (double p : phases)
      if (!std::isfinite(p)) throw std::invalid_argument("phases must be finite");
    if (n == 1) {
      if (segment_angles[0] != target_angle)
        throw std::invalid_argument("single-segment sequence must carry the target angle");
      return;
    }
    for (std::size_t k = 0; k < n; ++k) {
      const double want = (k == 0 || k == n - 1) ? pi / 4.0 : pi / 2.0;
      if (segment_angles[k] != want)
        throw std::invalid_argument("segment angles must follow the (pi/4, pi/2..., pi/4) layout");
    }
  }
};

// Builds the standard layout from the phase list alone.
inline CompositeSequence make_sequence(double target_angle, std::vector<double> phases) {
  CompositeSequence seq;
  seq.target_angle = target_angle;
  const std::size_t n = phases.size();
  if (n == 1) {
    seq.segment_angles = {target_angle};
  } else {
    seq.segment_angles.assign(n, pi / 2.0);
    if (n >= 2) {
      seq.segment_angles.front() = pi / 4.0;
      seq.segment_angles.back() = pi / 4.0;
    }
  }
  seq.phases = std::move(phases);
  seq.validate();
  return seq;
}

// Product over segments, first segment applied first (rightmost factor).
inline Mat4 composite_propagator(const CompositeSequence& seq, double eps) {
  seq.validate();
  Mat4 result = identity4();
  for (int k = 0; k < seq.size(); ++k) {
    const std::size_t i = static_cast<std::size_t>(k);
    result = shifted_propagator(seq.segment_angles[i] * (1.0 + eps), seq.phases[i]) * result;
  }
  return result;
}

// Jet of the full composite about eps = center, assembled by folding segment
// jets in the same order as the propagator product.
inline MatrixJet composite_jet(const CompositeSequence& seq, double center, int order) {
  seq.validate();
  MatrixJet acc = segment_jet(seq.segment_angles[0], seq.phases[0], center, order);
  for (int k = 1; k < seq.size(); ++k) {
    const std::size_t i = static_cast<std::size_t>(k);
    acc = jet_multiply(segment_jet(seq.segment_angles[i], seq.phases[i], center, order), acc);
  }
  return acc;
}

// Circuit-facing form: adjacent phase gates merged, so each slot carries the
// difference phi_{k+1} - phi_k, with phi_1 leading and -phi_N trailing. The
// end slots are kept even when zero.
struct GateInstr {
  enum class Kind { phase, xx };
  Kind kind;
  int qubit_a = 0;     // phase target, or first coupling qubit
  int qubit_b = 1;     // second coupling qubit (xx only)
  double angle = 0.0;  // radians
};

using GateList = std::vector<GateInstr>;

inline GateList emit_gate_list(const CompositeSequence& seq, double eps = 0.0) {
  seq.validate();
  GateList list;
  list.push_back({GateInstr::Kind::phase, 0, 1, seq.phases[0]});
  for (int k = 0; k < seq.size(); ++k) {
    const std::size_t i = static_cast<std::size_t>(k);
    list.push_back({GateInstr::Kind::xx, 0, 1, seq.segment_angles[i] * (1.0 + eps)});
    const double next = (k + 1 < seq.size()) ? seq.phases[i + 1] : 0.0;
    list.push_back({GateInstr::Kind::phase, 0, 1, next - seq.phases[i]});
  }
  return list;
}

inline Mat4 simulate_gate_list(const GateList& list) {
  Mat4 result = identity4();
  for (const GateInstr& g : list) {
    const Mat4 step = (g.kind == GateInstr::Kind::phase) ? phase_gate_q1(g.angle) : xx_propagator(g.angle);
    result = step * result;
  }
  return result;
}

// Text form, one instruction per line, angles in units of pi:
//   PHASE <qubit> <angle/pi>
//   XX <qubit-a> <qubit-b> <angle/pi>
inline std::string gate_list_to_text(const GateList& list) {
  std::string out;
  for (const GateInstr& g : list) {
    if (g.kind == GateInstr::Kind::phase) {
      out += "PHASE " + std::to_string(g.qubit_a) + " " + format_real(g.angle / pi) + "\n";
    } else {
      out += "XX " + std::to_string(g.qubit_a) + " " + std::to_string(g.qubit_b) + " " +
             format_real(g.angle / pi) + "\n";
    }
  }
  return out;
}

inline GateList gate_list_from_text(std::string_view text) {
  GateList list;
  for (std::string_view line : split(text, '\n')) {
    if (line.empty()) continue;
    std::vector<std::string_view> tok = split(line, ' ');
    if (tok.size() == 3 && tok[0] == "PHASE") {
      list.push_back({GateInstr::Kind::phase, static_cast<int>(parse_real(tok[1])), 1,
                      parse_real(tok[2]) * pi});
    } else if (tok.size() == 4 && tok[0] == "XX") {
      list.push_back({GateInstr::Kind::xx, static_cast<int>(parse_real(tok[1])),
                      static_cast<int>(parse_real(tok[2])), parse_real(tok[3]) * pi});
    } else {
      throw std::invalid_argument("unrecognized gate line: '" + std::string(line) + "'");
    }
  }
  return list;
}

}  // namespace nbgate
