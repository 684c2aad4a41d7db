#include "morse/homology.hpp"

#include <algorithm>
#include <sstream>

namespace morse {

BigMatrix::BigMatrix(std::initializer_list<std::initializer_list<long long>> rows)
{
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_)
            throw Error("BigMatrix: ragged initializer");
        for (long long v : r)
            data_.emplace_back(v);
    }
}

BigMatrix BigMatrix::identity(std::size_t n)
{
    BigMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.at(i, i) = 1;
    return m;
}

bool BigMatrix::is_zero() const
{
    return std::all_of(data_.begin(), data_.end(), [](const BigInt& v) { return v == 0; });
}

BigMatrix BigMatrix::operator*(const BigMatrix& o) const
{
    if (cols_ != o.rows_)
        throw Error("BigMatrix: shape mismatch in product");
    BigMatrix out(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const BigInt& a = at(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) {
                const BigInt& b = o.at(k, j);
                if (b != 0) out.at(i, j) += a * b;
            }
        }
    return out;
}

BigInt BigMatrix::determinant() const
{
    if (rows_ != cols_)
        throw Error("BigMatrix: determinant of non-square matrix");
    const std::size_t n = rows_;
    if (n == 0) return 1;

    BigMatrix m = *this;
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m.at(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m.at(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j)
                std::swap(m.at(k, j), m.at(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
        prev = m.at(k, k);
    }
    return sign > 0 ? m.at(n - 1, n - 1) : BigInt(-m.at(n - 1, n - 1));
}

std::string BigMatrix::to_string() const
{
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        os << (i ? "; " : "");
        for (std::size_t j = 0; j < cols_; ++j)
            os << (j ? " " : "") << at(i, j);
    }
    os << "]";
    return os.str();
}

std::vector<BigInt> SNFResult::invariant_factors() const
{
    std::vector<BigInt> d;
    const std::size_t n = std::min(S.rows(), S.cols());
    for (std::size_t i = 0; i < n; ++i)
        if (S.at(i, i) != 0)
            d.push_back(S.at(i, i));
    return d;
}

namespace {

struct Reducer {
    BigMatrix& S;
    BigMatrix& U;  // rows()×rows() accumulating row ops
    BigMatrix& V;  // cols()×cols() accumulating col ops

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b) return;
        for (std::size_t j = 0; j < S.cols(); ++j) std::swap(S.at(a, j), S.at(b, j));
        for (std::size_t j = 0; j < U.cols(); ++j) std::swap(U.at(a, j), U.at(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b)
    {
        if (a == b) return;
        for (std::size_t i = 0; i < S.rows(); ++i) std::swap(S.at(i, a), S.at(i, b));
        for (std::size_t i = 0; i < V.rows(); ++i) std::swap(V.at(i, a), V.at(i, b));
    }
    // row a += q * row b
    void add_row(std::size_t a, std::size_t b, const BigInt& q)
    {
        if (q == 0) return;
        for (std::size_t j = 0; j < S.cols(); ++j)
            if (S.at(b, j) != 0) S.at(a, j) += q * S.at(b, j);
        for (std::size_t j = 0; j < U.cols(); ++j)
            if (U.at(b, j) != 0) U.at(a, j) += q * U.at(b, j);
    }
    // col a += q * col b
    void add_col(std::size_t a, std::size_t b, const BigInt& q)
    {
        if (q == 0) return;
        for (std::size_t i = 0; i < S.rows(); ++i)
            if (S.at(i, b) != 0) S.at(i, a) += q * S.at(i, b);
        for (std::size_t i = 0; i < V.rows(); ++i)
            if (V.at(i, b) != 0) V.at(i, a) += q * V.at(i, b);
    }
    void negate_row(std::size_t a)
    {
        for (std::size_t j = 0; j < S.cols(); ++j) S.at(a, j) = -S.at(a, j);
        for (std::size_t j = 0; j < U.cols(); ++j) U.at(a, j) = -U.at(a, j);
    }
};

} // namespace

SNFResult smith_normal_form(const BigMatrix& A)
{
    SNFResult res;
    res.S = A;
    res.U = BigMatrix::identity(A.rows());
    res.V = BigMatrix::identity(A.cols());
    Reducer rd{res.S, res.U, res.V};
    BigMatrix& S = res.S;

    const std::size_t m = S.rows(), n = S.cols();
    const std::size_t steps = std::min(m, n);

    for (std::size_t t = 0; t < steps; ++t) {
        // smallest nonzero |entry| in the trailing submatrix, ties by position
        std::size_t pi = t, pj = t;
        BigInt best = 0;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j) {
                const BigInt& v = S.at(i, j);
                if (v == 0) continue;
                BigInt a = abs(v);
                if (best == 0 || a < best) {
                    best = a;
                    pi = i;
                    pj = j;
                }
            }
        if (best == 0)
            break;  // trailing submatrix is zero
        rd.swap_rows(t, pi);
        rd.swap_cols(t, pj);

        for (;;) {
            // clear column t below the pivot
            bool dirty = false;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (S.at(i, t) == 0) continue;
                BigInt q = S.at(i, t) / S.at(t, t);
                rd.add_row(i, t, -q);
                if (S.at(i, t) != 0) {
                    rd.swap_rows(t, i);  // strictly smaller remainder becomes pivot
                    dirty = true;
                }
            }
            if (dirty) continue;
            // clear row t right of the pivot
            for (std::size_t j = t + 1; j < n; ++j) {
                if (S.at(t, j) == 0) continue;
                BigInt q = S.at(t, j) / S.at(t, t);
                rd.add_col(j, t, -q);
                if (S.at(t, j) != 0) {
                    rd.swap_cols(t, j);
                    dirty = true;
                }
            }
            if (dirty) continue;

            // pivot must divide every remaining entry, else fold the offending
            // row in and keep reducing (this is what makes d1 | d2 | ... hold)
            bool divides_all = true;
            for (std::size_t i = t + 1; i < m && divides_all; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (S.at(i, j) % S.at(t, t) != 0) {
                        rd.add_row(t, i, 1);
                        divides_all = false;
                        break;
                    }
            if (divides_all)
                break;
        }
        if (S.at(t, t) < 0)
            rd.negate_row(t);
    }
    return res;
}

long long HomologyProfile::euler_characteristic() const
{
    long long chi = 0;
    int sign = 1;
    for (const auto& g : groups) {
        chi += sign * static_cast<long long>(g.betti);
        sign = -sign;
    }
    return chi;
}

std::string HomologyProfile::to_string() const
{
    std::ostringstream os;
    os << "(";
    for (std::size_t k = 0; k < groups.size(); ++k) {
        if (k) os << ", ";
        const auto& g = groups[k];
        bool wrote = false;
        if (g.betti == 1) { os << "Z"; wrote = true; }
        else if (g.betti > 1) { os << "Z^" << g.betti; wrote = true; }
        for (long long t : g.torsion) {
            if (wrote) os << "+";
            os << "Z/" << t;
            wrote = true;
        }
        if (!wrote) os << "0";
    }
    os << ")";
    return os.str();
}

HomologyProfile homology_of_complex(const ChainComplexData& cx)
{
    const std::size_t degs = cx.ranks.size();
    if (cx.boundaries.size() != degs)
        throw Error("homology_of_complex: need one boundary matrix per degree");
    for (std::size_t k = 0; k < degs; ++k) {
        const std::size_t want_rows = (k == 0) ? 0 : cx.ranks[k - 1];
        if (cx.boundaries[k].rows() != want_rows || cx.boundaries[k].cols() != cx.ranks[k])
            throw Error("homology_of_complex: boundary shape mismatch at degree " +
                        std::to_string(k));
    }
    for (std::size_t k = 1; k + 1 < degs; ++k)
        if (!(cx.boundaries[k] * cx.boundaries[k + 1]).is_zero())
            throw NotAComplex("boundary composition nonzero at degree " + std::to_string(k + 1));

    HomologyProfile prof;
    prof.groups.resize(degs);
    std::vector<std::size_t> rank_d(degs + 1, 0);
    std::vector<std::vector<BigInt>> factors(degs + 1);
    for (std::size_t k = 1; k < degs; ++k) {
        auto snf = smith_normal_form(cx.boundaries[k]);
        auto f = snf.invariant_factors();
        rank_d[k] = f.size();
        factors[k] = std::move(f);
    }
    for (std::size_t k = 0; k < degs; ++k) {
        const std::size_t above = (k + 1 < degs) ? rank_d[k + 1] : 0;
        if (cx.ranks[k] < rank_d[k] + above)
            throw Error("homology_of_complex: negative betti number (bad complex)");
        prof.groups[k].betti = cx.ranks[k] - rank_d[k] - above;
        if (k + 1 < degs)
            for (const BigInt& d : factors[k + 1])
                if (d > 1)
                    prof.groups[k].torsion.push_back(d.convert_to<long long>());
    }
    return prof;
}

} // namespace morse
