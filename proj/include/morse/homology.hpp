#ifndef MORSE_HOMOLOGY_HPP
#define MORSE_HOMOLOGY_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "morse/errors.hpp"

namespace morse {

using BigInt = boost::multiprecision::cpp_int;

/// Dense integer matrix with exact arithmetic.  Row-major, desk scale.
class BigMatrix {
public:
    BigMatrix() : rows_(0), cols_(0) {}
    BigMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}
    BigMatrix(std::initializer_list<std::initializer_list<long long>> rows);

    static BigMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    BigInt& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const BigInt& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool is_zero() const;
    bool operator==(const BigMatrix& o) const = default;

    BigMatrix operator*(const BigMatrix& o) const;

    /// Exact determinant (square matrices), Bareiss fraction-free elimination.
    BigInt determinant() const;

    std::string to_string() const;

private:
    std::size_t rows_, cols_;
    std::vector<BigInt> data_;
};

/// U * A * V = S with U, V unimodular and S diagonal with d1 | d2 | ...
struct SNFResult {
    BigMatrix S;
    BigMatrix U;
    BigMatrix V;

    std::vector<BigInt> invariant_factors() const;  // nonzero diagonal entries
    std::size_t rank() const { return invariant_factors().size(); }
};

/// Smith normal form by unimodular row/column reduction.  Pivot rule:
/// smallest nonzero absolute value, ties by position.
SNFResult smith_normal_form(const BigMatrix& A);

/// One homology group: free rank plus invariant-factor torsion list
/// (each entry > 1, forming a divisibility chain).
struct HomologyGroup {
    std::size_t betti = 0;
    std::vector<long long> torsion;

    bool operator==(const HomologyGroup&) const = default;
};

struct HomologyProfile {
    std::vector<HomologyGroup> groups;  // degree 0..n

    bool operator==(const HomologyProfile&) const = default;
    long long euler_characteristic() const;
    std::string to_string() const;  // e.g. "(Z, Z/2, 0)"
};

/// Finite chain complex: ranks[k] = rank C_k; boundaries[k] = matrix of
/// ∂_k : C_k -> C_{k-1}, shape ranks[k-1] x ranks[k].  boundaries[0] has
/// zero rows.  Degrees above the top are implicitly rank 0.
struct ChainComplexData {
    std::vector<std::size_t> ranks;
    std::vector<BigMatrix> boundaries;
};

/// Integer homology of a chain complex via SNF:
/// betti_k = rank C_k − rank ∂_k − rank ∂_{k+1},
/// torsion_k = invariant factors of ∂_{k+1} exceeding 1.
/// Throws NotAComplex if some composition ∂_k ∂_{k+1} is nonzero.
HomologyProfile homology_of_complex(const ChainComplexData& cx);

} // namespace morse

#endif
