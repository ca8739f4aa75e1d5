#pragma once

// Deflation of uncontrollable and unobservable eigenvalues (finite and
// infinite) of a linear system quadruple with unitary transformations.

#include <cstdint>
#include <optional>
#include <vector>

#include "sysmat/pencil.hpp"
#include "sysmat/staircase.hpp"

namespace sysmat {

enum class Side { controllable, observable };

/// Bookkeeping of one deflation. For the controllable side
///   diag(U, I) * S * diag(V, I) * W_tilde = [[X, 0, 0], [*, A_c, -B_c], [*, C_c, D_c]]
/// and the new transfer function is R * w33. The observable side is the
/// transposed statement, with W_tilde acting from the left and R_o = w33 * R.
struct ReductionRecord {
  Side side = Side::controllable;
  ComplexMatrix u;
  ComplexMatrix v;
  ComplexMatrix w_tilde;
  ComplexMatrix w33;
  Index d_deflated = 0;
  Pencil x_deflated;
  Rotation rotation;
  bool ambiguous = false;
};

struct Reduction {
  SystemQuadruple q;
  ReductionRecord record;
};

struct OffendingEigenvalue {
  std::optional<Complex> value;  // nullopt is infinity
  Side side;
};

struct MinimalityReport {
  bool e_controllable = false;
  bool e_observable = false;
  bool strongly_minimal = false;
  std::vector<OffendingEigenvalue> offending;
};

MinimalityReport is_strongly_minimal(const SystemQuadruple& q, double tol = kDefaultTol,
                                     std::uint64_t seed = 0x5eed);

/// Both identity-bordered pencils [[A, -B, 0], [C, D, -I]] and
/// [[A, -B], [C, D], [0, I]] are free of finite zeros and of zeros at infinity.
bool is_strongly_irreducible(const SystemQuadruple& q, double tol = kDefaultTol,
                             std::uint64_t seed = 0x5eed);

Reduction reduce_controllable(const SystemQuadruple& q, double tol = kDefaultTol,
                              std::uint64_t seed = 0x5eed);
Reduction reduce_observable(const SystemQuadruple& q, double tol = kDefaultTol,
                            std::uint64_t seed = 0x5eed);

/// Step 2 with the non-unitary elimination E = -W11_hat^{-1} W13. The result
/// realizes R itself; only used to cross-check the unitary variant.
struct NonUnitaryReduction {
  SystemQuadruple q;
  ComplexMatrix e;
  Index d_deflated = 0;
};
NonUnitaryReduction reduce_controllable_nonunitary(const SystemQuadruple& q,
                                                   double tol = kDefaultTol,
                                                   std::uint64_t seed = 0x5eed);

enum class ReductionOrder { controllable_first, observable_first };

/// R_co = wl * R * wr.
struct MinimalReduction {
  SystemQuadruple q;
  ComplexMatrix wl;
  ComplexMatrix wr;
  std::vector<ReductionRecord> records;
};

MinimalReduction strongly_minimal_reduce(
    const SystemQuadruple& q, double tol = kDefaultTol, std::uint64_t seed = 0x5eed,
    ReductionOrder order = ReductionOrder::controllable_first);

}  // namespace sysmat
