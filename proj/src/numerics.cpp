// Cyclic Jacobi for Hermitian matrices, plus sqrt_psd / tensor / partial_trace.
//
// The Jacobi update keeps the working matrix exactly Hermitian: the 2x2 pivot block is set
// from the analytic eigenvalue formulas, rows p and q are rotated with a contiguous kernel
// rot2, and columns are mirrored from the rows by conjugation. The accumulated transform W
// (product of left rotations) is also built row-wise, so every inner loop is contiguous.
#include "fockbit/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fockbit/errors.hpp"

namespace fockbit {

namespace {

double off_diagonal_frobenius(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = i + 1; j < a.cols; ++j) s += std::norm(a.at(i, j));
    return std::sqrt(2.0 * s);
}

} // namespace

HermitianEigenResult eigh(const ComplexMatrix& input) {
    if (!input.square()) throw ValidationError("eigh: matrix not square");
    if (input.rows == 0) throw ValidationError("eigh: empty matrix");
    if (!all_finite(input)) throw ValidationError("eigh: non-finite entries");
    if (hermiticity_defect(input) > kHermitianTol)
        throw ValidationError("eigh: input not Hermitian within 1e-10");

    const std::size_t n = input.rows;
    ComplexMatrix a = input;
    // Clean numerical dust so the working matrix is Hermitian to the last bit.
    for (std::size_t i = 0; i < n; ++i) {
        a.at(i, i) = cplx(a.at(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx avg = 0.5 * (a.at(i, j) + std::conj(a.at(j, i)));
            a.at(i, j) = avg;
            a.at(j, i) = std::conj(avg);
        }
    }

    ComplexMatrix w = ComplexMatrix::identity(n); // accumulates J_t^dag ... J_1^dag
    const double off_target = kJacobiOffTol * std::max(1.0, frobenius_norm(a));
    const double elem_threshold = off_target / static_cast<double>(n);

    bool converged = off_diagonal_frobenius(a) <= off_target;
    int sweeps = 0;
    while (!converged) {
        if (sweeps++ >= kJacobiMaxSweeps)
            throw NumericGuardError("eigh: no convergence within 100 Jacobi sweeps");
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a.at(p, q);
                const double h = std::abs(apq);
                if (h <= elem_threshold) continue;

                const double app = a.at(p, p).real();
                const double aqq = a.at(q, q).real();
                const cplx phase = apq / h;
                const double tau = (aqq - app) / (2.0 * h);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Left-multiply by J^dag on rows p, q of both A and W.
                const cplx a00 = c;
                const cplx a01 = -s * phase;
                const cplx a10 = s;
                const cplx a11 = c * phase;
                kern::rot2(a00, a01, a10, a11, a.row(p), a.row(q), n);
                kern::rot2(a00, a01, a10, a11, w.row(p), w.row(q), n);

                // Pivot block analytically, columns by Hermitian mirroring.
                a.at(p, p) = app - t * h;
                a.at(q, q) = aqq + t * h;
                a.at(p, q) = 0.0;
                a.at(q, p) = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    a.at(i, p) = std::conj(a.at(p, i));
                    a.at(i, q) = std::conj(a.at(q, i));
                }
            }
        }
        converged = off_diagonal_frobenius(a) <= off_target;
    }

    // Ascending eigenvalue order; eigenvectors are the conjugated rows of W.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a.at(i, i).real() < a.at(j, j).real();
    });

    HermitianEigenResult result;
    result.eigenvalues.resize(n);
    result.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        result.eigenvalues[j] = a.at(order[j], order[j]).real();
        const cplx* wrow = w.row(order[j]);
        for (std::size_t i = 0; i < n; ++i) result.eigenvectors.at(i, j) = std::conj(wrow[i]);
    }
    return result;
}

ComplexMatrix sqrt_psd(const ComplexMatrix& a) {
    HermitianEigenResult eig = eigh(a);
    const std::size_t n = a.rows;
    std::vector<double> root(n);
    for (std::size_t i = 0; i < n; ++i) {
        double lambda = eig.eigenvalues[i];
        if (lambda < -kPsdClampTol)
            throw ValidationError("sqrt_psd: eigenvalue below -1e-10, input not PSD");
        root[i] = std::sqrt(std::max(lambda, 0.0));
    }
    // R = V sqrt(diag) V^dag, with the column scaling folded into the left factor.
    ComplexMatrix scaled = eig.eigenvectors;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scaled.at(i, j) *= root[j];
    ComplexMatrix r = mul_adjB(scaled, eig.eigenvectors);
    // Symmetrize away the last-bit asymmetry from the two-pass product.
    for (std::size_t i = 0; i < n; ++i) {
        r.at(i, i) = cplx(r.at(i, i).real(), 0.0);
        for (std::size_t j = i + 1; j < n; ++j) {
            const cplx avg = 0.5 * (r.at(i, j) + std::conj(r.at(j, i)));
            r.at(i, j) = avg;
            r.at(j, i) = std::conj(avg);
        }
    }
    return r;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows * b.rows, a.cols * b.cols);
    for (std::size_t ia = 0; ia < a.rows; ++ia) {
        for (std::size_t ib = 0; ib < b.rows; ++ib) {
            cplx* out = c.row(ia * b.rows + ib);
            const cplx* brow = b.row(ib);
            for (std::size_t ja = 0; ja < a.cols; ++ja)
                kern::scal_copy(a.at(ia, ja), brow, out + ja * b.cols, b.cols);
        }
    }
    return c;
}

ComplexMatrix partial_trace(const ComplexMatrix& m,
                            const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep) {
    if (!m.square()) throw ValidationError("partial_trace: matrix not square");
    std::size_t total = 1;
    for (std::size_t d : dims) {
        if (d == 0) throw ValidationError("partial_trace: zero subsystem dimension");
        total *= d;
    }
    if (total != m.rows) throw ValidationError("partial_trace: dims do not factor the matrix");
    if (keep.empty()) throw ValidationError("partial_trace: keep set is empty");
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] >= dims.size()) throw ValidationError("partial_trace: keep index out of range");
        if (i > 0 && keep[i] <= keep[i - 1])
            throw ValidationError("partial_trace: keep indices must be strictly increasing");
    }

    // Row-major strides, subsystem 0 most significant.
    std::vector<std::size_t> stride(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) stride[i - 1] = stride[i] * dims[i];

    std::vector<std::size_t> traced;
    for (std::size_t i = 0; i < dims.size(); ++i)
        if (!std::binary_search(keep.begin(), keep.end(), i)) traced.push_back(i);

    // Flat offsets for every kept multi-index (row-major over the kept dims, in order)
    // and every traced multi-index.
    auto offsets_for = [&](const std::vector<std::size_t>& subs) {
        std::size_t count = 1;
        for (std::size_t s : subs) count *= dims[s];
        std::vector<std::size_t> offs(count, 0);
        std::size_t repeat = count;
        for (std::size_t s : subs) {
            repeat /= dims[s];
            std::size_t idx = 0;
            while (idx < count)
                for (std::size_t digit = 0; digit < dims[s]; ++digit)
                    for (std::size_t r = 0; r < repeat; ++r) offs[idx++] += digit * stride[s];
        }
        return offs;
    };
    const std::vector<std::size_t> keep_offsets = offsets_for(keep);
    const std::vector<std::size_t> trace_offsets = offsets_for(traced);

    const std::size_t out_dim = keep_offsets.size();
    ComplexMatrix out(out_dim, out_dim);
    for (std::size_t rj = 0; rj < out_dim; ++rj)
        for (std::size_t rk = 0; rk < out_dim; ++rk) {
            cplx sum = 0.0;
            for (std::size_t t : trace_offsets)
                sum += m.at(keep_offsets[rj] + t, keep_offsets[rk] + t);
            out.at(rj, rk) = sum;
        }
    return out;
}

} // namespace fockbit
