// Hermitian eigendecomposition (cyclic Jacobi), PSD square root, tensor product and
// partial trace. These are the only linear-algebra entry points the rest of the code uses.
#pragma once

#include <cstddef>
#include <vector>

#include "fockbit/matrix.hpp"

namespace fockbit {

// Tolerances shared across the numeric layer.
inline constexpr double kHermitianTol = 1e-10;   // max-norm Hermiticity defect accepted on input
inline constexpr double kPsdClampTol = 1e-10;    // eigenvalues in [-kPsdClampTol, 0) clamp to 0
inline constexpr double kJacobiOffTol = 1e-14;   // off-diagonal Frobenius target (relative to max(1, ||A||_F))
inline constexpr int kJacobiMaxSweeps = 100;

struct HermitianEigenResult {
    std::vector<double> eigenvalues; // ascending
    ComplexMatrix eigenvectors;      // columns match eigenvalue order; unitary
};

// Cyclic-by-rows Jacobi with per-element thresholding. The matrix is kept exactly Hermitian
// through every rotation (rows rotated, columns mirrored), so the accumulated transform stays
// unitary to rounding. Throws ValidationError on non-square/non-Hermitian/non-finite input and
// NumericGuardError if the sweep cap is hit.
HermitianEigenResult eigh(const ComplexMatrix& a);

// V sqrt(diag) V^dagger with eigenvalues clamped per kPsdClampTol; eigenvalues below
// -kPsdClampTol reject the input as non-PSD.
ComplexMatrix sqrt_psd(const ComplexMatrix& a);

// Kronecker product; index convention (i_a*rows_b + i_b, j_a*cols_b + j_b), i.e. the right
// factor occupies the least-significant index digits.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

// Trace out every subsystem not listed in `keep`. `dims` lists subsystem dimensions from the
// most significant index digit to the least (matching tensor()); `keep` holds indices into
// `dims`, strictly increasing. Kept subsystems preserve their relative order.
ComplexMatrix partial_trace(const ComplexMatrix& m,
                            const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep);

} // namespace fockbit
