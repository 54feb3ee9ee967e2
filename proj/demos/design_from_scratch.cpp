// Designs the 5-segment half-turn composite from random starts, checks the
// result against the embedded reference row, and prints its circuit.

#include <iostream>

#include "nbgate/design.hpp"
#include "nbgate/format.hpp"
#include "nbgate/sequence.hpp"

int main() {
  using nbgate::pi;

  nbgate::DesignSpec spec;
  spec.n_segments = 5;
  spec.target_angle = pi / 2.0;
  spec.order = 2;
  spec.solver.restarts = 32;

  const std::vector<nbgate::SolutionRecord> records = nbgate::solve(spec);
  if (records.empty()) {
    std::cerr << "no solution found\n";
    return 2;
  }

  const nbgate::SolutionRecord& best = records.front();
  std::cout << "phases_pi=";
  for (std::size_t i = 0; i < best.canonical_phases.size(); ++i) {
    if (i) std::cout << ',';
    std::cout << nbgate::format_real(best.canonical_phases[i] / pi);
  }
  std::cout << "\nresidual_rms=" << nbgate::format_real(best.residual_norm) << "\n";

  const nbgate::TableRow* row = nbgate::find_table_row(5, 0.5);
  std::vector<double> reference;
  for (double p : row->phases_pi) reference.push_back(p * pi);
  const double gap =
      nbgate::max_phase_distance(best.canonical_phases, nbgate::canonicalize(reference));
  std::cout << "distance_to_reference_pi=" << nbgate::format_real(gap / pi) << "\n\n";

  const nbgate::CompositeSequence seq =
      nbgate::make_sequence(spec.target_angle, best.phases);
  std::cout << gate_list_to_text(emit_gate_list(seq));
  return 0;
}
