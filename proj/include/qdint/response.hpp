#pragma once

#include <utility>
#include <vector>

#include "qdint/dynamics.hpp"

namespace qdint {

struct SpectrumTrace {
    std::vector<double> detunings; // units of Gamma1
    std::vector<double> values;
};

// Closed coherence block of the auxiliary-level V scheme: the optical
// coherences (rho12, rho32, rhob2) evolve autonomously under a 3x3 matrix
// whose eigenvalues give the fluorescence line positions and widths.
struct CoherenceBlock {
    ComplexMatrix matrix;
    std::vector<std::string> labels;
};

CoherenceBlock coherence_block(const LevelScheme& s, const DriveField& d,
                               const CouplingCoefficients& c);

struct LineComponent {
    double position;  // Im(lambda)
    double halfwidth; // -Re(lambda)
    bool is_coherent; // lambda = 0: elastic scattering, not a spectral line
};

std::vector<LineComponent> spectral_line_structure(const CoherenceBlock& block);

// Quantum regression:  C(tau) = tr[ op_a exp(L tau)(op_b rho_ss) ].
// Requires rho_ss stationary under l; taus ascending.
std::vector<cplx> two_time_correlation(const Liouvillian& l, const DensityMatrix& rho_ss,
                                       const ComplexMatrix& op_a, const ComplexMatrix& op_b,
                                       const std::vector<double>& taus);

// Incoherent stationary emission spectrum,
//   S(d) = Re sum_ij Gij Int_0^inf dt e^{i d t} (<Si+(0) Sj-(t)> - <Si+><Sj->),
// evaluated by resolvent solves rather than quadrature. The elastic
// (coherent) contribution is removed by subtracting the mean-field product.
SpectrumTrace fluorescence_spectrum(const Liouvillian& l, const DensityMatrix& rho_ss,
                                    const std::vector<ComplexMatrix>& lowering_ops,
                                    const CouplingCoefficients& c,
                                    const std::vector<double>& grid);

// Weak-probe absorption rate from first-order harmonic response: solve
//   (L0 + i d) rho1 = -(i/2)[Sp+, rho0]
// per unit probe Rabi frequency and read off the probed coherence. Positive
// values mean absorption; the response is linear in omega_p by construction.
// `factor` carries the printed convention (1 when probing the driven
// transition, 2 when probing the undriven one).
SpectrumTrace probe_absorption(const Liouvillian& l0, const ComplexMatrix& probe_raising,
                               std::pair<std::size_t, std::size_t> target, double omega_p,
                               const std::vector<double>& grid, double factor = 1.0);

struct Peak {
    double position;
    double height;
    double prominence;
};

// Local maxima with topographic prominence at least prominence_frac of the
// global maximum. An all-noise trace (max below an absolute floor) counts as
// peakless.
std::vector<Peak> find_peaks(const SpectrumTrace& trace, double prominence_frac = 0.02,
                             double floor = 1e-12);

double integrate_trace(const SpectrumTrace& trace);

} // namespace qdint
