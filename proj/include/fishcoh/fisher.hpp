#pragma once

#include <vector>

#include "fishcoh/fisher_datum.hpp"
#include "fishcoh/iochannel.hpp"
#include "fishcoh/qcore.hpp"

namespace fishcoh {

/// sum_x d_x^2 / p_x.
///
/// An outcome with p_x <= 1e-14 contributes nothing when |d_x| <= 1e-10 and
/// raises SingularOutcome otherwise; the divergence is reported, never
/// clipped.
double classical_fi(const FisherDatum& fd);

/// A parametrized family rho_theta known locally: its value and derivative at
/// theta0.
struct StateDerivativePair {
  DensityMatrix rho;
  ComplexMatrix drho;

  /// Throws DimensionMismatch if drho and rho differ in size, InvalidDatum
  /// unless drho is Hermitian and traceless to 1e-12.
  static StateDerivativePair make(DensityMatrix rho, ComplexMatrix drho);
};

/// rho_theta = E_theta(rho) at theta0 and its exact derivative
/// sum_x (dE_x rho E_x^dagger + E_x rho dE_x^dagger).
StateDerivativePair state_derivative(const ParametrizedIO& io,
                                     const DensityMatrix& rho);

/// Quantum Fisher information from the symmetric logarithmic derivative,
/// 2 sum_{lambda_i + lambda_j > 1e-12} |<i|drho|j>|^2 / (lambda_i + lambda_j).
/// Throws SingularFamily when the excluded kernel block of drho has norm
/// above 1e-8.
double qfi_sld(const StateDerivativePair& sd);

/// Classical datum of a projective measurement onto the columns of basis.
FisherDatum measurement_datum(const StateDerivativePair& sd,
                              const ComplexMatrix& basis);

/// Datum of reading E_theta(rho) out in the computational basis. For a
/// rank-1 operation with distinct output labels this coincides with the
/// post-selection distribution.
FisherDatum projective_readout_datum(const ParametrizedIO& io,
                                     const DensityMatrix& rho);

/// Eigenvalues of a generator diagonal in the preferred basis, each in [0, 1].
struct DiagonalGenerator {
  RealVector h;

  static DiagonalGenerator make(RealVector h);
};

/// rho_theta = U rho U^dagger with U = exp(i theta H); at theta0 the
/// diagonal phases are absorbed, so rho_theta0 = rho and drho = i[H, rho].
StateDerivativePair unitary_family(const DensityMatrix& rho,
                                   const DiagonalGenerator& gen, double theta0);

/// QFI of a qubit under U_theta = e^{i theta}|1><1| + |2><2|, evaluated with
/// the SLD formula. Equal to the coherence measure for qubits.
double qubit_coherence_analytic(const DensityMatrix& rho, double theta0 = 0.0);

/// 4 |rho_12|^2.
double qubit_closed_form(const DensityMatrix& rho);

struct UnitaryOptimum {
  double value = 0.0;
  DiagonalGenerator generator;
};

/// max over diagonal H with eigenvalues in [0,1] of 4 Var_phi(H) for a pure
/// state. The variance is convex in h, so the maximum sits on a vertex of the
/// box; all 2^d vertices are enumerated and the first maximizer (in binary
/// counting order, bit n <-> h_n) is returned.
UnitaryOptimum max_unitary_qfi_pure(const DensityMatrix& phi);

}  // namespace fishcoh
