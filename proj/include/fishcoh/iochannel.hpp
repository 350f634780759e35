#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fishcoh/fisher_datum.hpp"
#include "fishcoh/qcore.hpp"

namespace fishcoh {

/// One Kraus operator of the form
///
///   E(theta) = sum_n c_n exp(i r_n (theta - theta0)) |g(n)><n|
///
/// Column n is sent to output label g(n) with amplitude c_n; r_n in [0, 1] is
/// the phase rate. Any constant phase at theta0 lives in c.
struct IncoherentKraus {
  std::vector<int> g;
  ComplexVector c;
  RealVector r;

  /// Checks shapes, g(n) >= 0 and r_n in [0, 1]; throws InvalidKraus.
  static IncoherentKraus make(std::vector<int> g, ComplexVector c, RealVector r);

  int dim() const { return static_cast<int>(g.size()); }
  /// sum_n |c_n|^2.
  double weight() const;
  int max_label() const;
  /// Dense out_dim x dim matrix of E at theta = theta0 + offset.
  ComplexMatrix matrix(double offset, int out_dim) const;
  /// dE/dtheta at theta = theta0 + offset.
  ComplexMatrix derivative(double offset, int out_dim) const;
};

/// Kraus operators with weight below this are dropped on construction.
inline constexpr double kNegligibleKrausWeight = 1e-12;

/// A parametrized incoherent operation {E_x(theta)} with reference point
/// theta0. Input dimension is dim(); outputs live in a space of dimension
/// out_dim() = max(dim, largest label + 1).
class ParametrizedIO {
 public:
  ParametrizedIO(int dim, double theta0, std::vector<IncoherentKraus> kraus);

  int dim() const { return dim_; }
  int out_dim() const { return out_dim_; }
  double theta0() const { return theta0_; }
  const std::vector<IncoherentKraus>& kraus() const { return kraus_; }
  std::size_t size() const { return kraus_.size(); }

  ComplexMatrix kraus_matrix(std::size_t x, double theta) const;
  /// sum_x E_x(theta)^dagger E_x(theta).
  ComplexMatrix completeness_sum(double theta) const;

 private:
  int dim_;
  int out_dim_;
  double theta0_;
  std::vector<IncoherentKraus> kraus_;
};

enum class ValidityCertificate { GroupDiagonal, ThetaGrid, None };

std::string_view to_string(ValidityCertificate cert);

/// Kraus operators sharing one rate vector. Their completeness partial sums
/// are cut greedily, in input order, at every point where the running sum is
/// diagonal; each resulting block is listed with its diagonal.
struct RateGroup {
  RealVector rate;
  std::vector<std::size_t> members;
  struct Block {
    std::vector<std::size_t> members;
    RealVector diagonal;
  };
  std::vector<Block> blocks;
  /// max off-diagonal modulus of the whole group's completeness sum.
  double off_diagonal = 0.0;
};

struct ValidityReport {
  bool valid = false;
  ValidityCertificate certificate = ValidityCertificate::None;
  double residual_theta0 = 0.0;
  std::vector<RateGroup> groups;
  std::vector<double> grid_thetas;
  double grid_max_residual = 0.0;
  std::optional<ErrorCode> failure;
  std::optional<double> failing_theta;
  std::string message;
};

/// Completeness at theta0 to 1e-10; completeness at every theta either by the
/// group-diagonal certificate or, failing that, on 11 equispaced points of
/// [theta0 - pi, theta0 + pi] to 1e-8. Never throws; see require_valid.
ValidityReport validate_io(const ParametrizedIO& io);

/// Throws IncompleteAtTheta0 / IncompleteAtTheta when validate_io fails.
void require_valid(const ParametrizedIO& io);

/// True for each Kraus operator whose E^dagger E at theta0 has exactly one
/// eigenvalue above 1e-10.
std::vector<bool> rank1_certificate(const ParametrizedIO& io);
bool is_rank1(const ParametrizedIO& io);

/// sum_x E_x(theta) rho E_x(theta)^dagger, an out_dim x out_dim state.
DensityMatrix apply_io(const ParametrizedIO& io, const DensityMatrix& rho,
                       double theta);

/// Post-selection distribution p_x = tr(E_x rho E_x^dagger) at theta0 and its
/// exact theta-derivative.
FisherDatum postselect_distribution(const ParametrizedIO& io,
                                    const DensityMatrix& rho);

struct ClassicalEnsemble {
  std::vector<double> weights;
  std::vector<DensityMatrix> states;
};

/// {t_l, K_l rho K_l^dagger / t_l} for a fixed (theta-independent) Kraus
/// set; members with t_l < 1e-12 are dropped. Throws Incomplete if
/// sum K^dagger K differs from I by more than 1e-10.
ClassicalEnsemble postmeasurement_ensemble(std::span<const IncoherentKraus> kraus,
                                           const DensityMatrix& rho);

/// sum_l K_l rho K_l^dagger for a fixed Kraus set (same checks as above).
DensityMatrix apply_kraus(std::span<const IncoherentKraus> kraus,
                          const DensityMatrix& rho);

/// Splits every E_x = A_x U_x(theta) into rank-1 pieces |i><psi_i| U_x(theta)
/// from the eigen-decomposition A_x^dagger A_x = sum_i |psi_i><psi_i|.
/// Output labels are assigned 0, 1, 2, ... in (x, i) order.
ParametrizedIO refine_to_rank1(const ParametrizedIO& io);

/// The family {E_x K_l}: the fixed incoherent Kraus set {K_l} acts first,
/// then the parametrized IO. Output labels of every K_l must be < io.dim().
ParametrizedIO compose_after(const ParametrizedIO& io,
                             std::span<const IncoherentKraus> first);

/// Three-operator IO on the largest-modulus off-diagonal pair (j, k):
///   E_1 = (e^{i(theta+gamma)} |j><j| + |j><k|) / sqrt2
///   E_2 = (-e^{i(theta+gamma)} |k><j| + |k><k|) / sqrt2
///   E_3 = identity on the remaining levels
/// with gamma = pi/4 - arg(rho_jk) - theta0. Throws StateIncoherent when no
/// off-diagonal modulus exceeds 1e-9.
ParametrizedIO witness_io(const DensityMatrix& rho, double theta0 = 0.0);

}  // namespace fishcoh
