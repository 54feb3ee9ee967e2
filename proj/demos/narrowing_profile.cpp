// Prints how the target-fidelity peak narrows as segments are added, using
// the embedded half-turn designs, and how well each one leaves the idle
// state alone across the [-1, -0.5] deviation band.

#include <iostream>

#include "nbgate/analysis.hpp"
#include "nbgate/design.hpp"
#include "nbgate/format.hpp"
#include "nbgate/sequence.hpp"

int main() {
  using nbgate::pi;

  std::cout << "segments  fwhm      vs_bare   idle_band_min\n";

  const nbgate::CompositeSequence bare = nbgate::make_sequence(pi / 2.0, {0.0});
  const nbgate::FidelityProfile base = nbgate::profile(bare, -1.5, 1.5, 3001);
  const double w0 = nbgate::fwhm(base).value();
  std::cout << "       1  " << nbgate::format_real(w0) << "   1         "
            << nbgate::format_real(nbgate::crosstalk_metric(base, -1.0, -0.5)) << "\n";

  for (int n : {5, 7, 9, 11}) {
    const nbgate::TableRow* row = nbgate::find_table_row(n, 0.5);
    const nbgate::FidelityProfile p =
        nbgate::profile(nbgate::sequence_from_row(*row), -1.5, 1.5, 3001);
    const double w = nbgate::fwhm(p).value();
    std::cout << "      " << (n < 10 ? " " : "") << n << "  " << nbgate::format_real(w)
              << "  " << nbgate::format_real(w / w0) << "  "
              << nbgate::format_real(nbgate::crosstalk_metric(p, -1.0, -0.5)) << "\n";
  }
  return 0;
}
