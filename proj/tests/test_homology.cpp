#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "morse/homology.hpp"

using namespace morse;

namespace {

bool is_diagonal(const BigMatrix& m)
{
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j && m.at(i, j) != 0) return false;
    return true;
}

void check_snf_contract(const BigMatrix& A)
{
    const SNFResult r = smith_normal_form(A);
    CHECK(is_diagonal(r.S));
    CHECK(r.U * A * r.V == r.S);
    CHECK(abs(r.U.determinant()) == 1);
    CHECK(abs(r.V.determinant()) == 1);
    const auto d = r.invariant_factors();
    for (std::size_t i = 0; i + 1 < d.size(); ++i) {
        CHECK(d[i] > 0);
        CHECK(d[i + 1] % d[i] == 0);
    }
}

BigMatrix random_matrix(std::mt19937& rng, std::size_t max_dim, int max_abs)
{
    std::uniform_int_distribution<std::size_t> dim(1, max_dim);
    std::uniform_int_distribution<int> entry(-max_abs, max_abs);
    BigMatrix m(dim(rng), dim(rng));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            m.at(i, j) = entry(rng);
    return m;
}

} // namespace

TEST_CASE("SNF of identity and zero")
{
    const BigMatrix id = BigMatrix::identity(4);
    const SNFResult ri = smith_normal_form(id);
    CHECK(ri.S == id);
    CHECK(ri.rank() == 4);

    const BigMatrix z(3, 5);
    const SNFResult rz = smith_normal_form(z);
    CHECK(rz.S.is_zero());
    CHECK(rz.rank() == 0);
    check_snf_contract(z);
}

TEST_CASE("SNF invariant factors of [[2,4],[6,8]]")
{
    const BigMatrix A{{2, 4}, {6, 8}};
    const SNFResult r = smith_normal_form(A);
    const auto d = r.invariant_factors();
    REQUIRE(d.size() == 2);
    CHECK(d[0] == 2);
    CHECK(d[1] == 4);
    check_snf_contract(A);
}

TEST_CASE("SNF contract on random matrices")
{
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 200; ++trial)
        check_snf_contract(random_matrix(rng, 8, 9));
}

TEST_CASE("invariant factors are stable under permutations and sign flips")
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const BigMatrix A = random_matrix(rng, 6, 9);
        const auto base = smith_normal_form(A).invariant_factors();

        BigMatrix B = A;
        // shuffle rows/cols, flip random signs
        std::vector<std::size_t> rows(B.rows()), cols(B.cols());
        std::iota(rows.begin(), rows.end(), 0);
        std::iota(cols.begin(), cols.end(), 0);
        std::shuffle(rows.begin(), rows.end(), rng);
        std::shuffle(cols.begin(), cols.end(), rng);
        BigMatrix C(B.rows(), B.cols());
        std::bernoulli_distribution coin;
        for (std::size_t i = 0; i < B.rows(); ++i) {
            const int rs = coin(rng) ? -1 : 1;
            for (std::size_t j = 0; j < B.cols(); ++j)
                C.at(i, j) = rs * B.at(rows[i], cols[j]);
        }
        CHECK(smith_normal_form(C).invariant_factors() == base);
    }
}

TEST_CASE("homology of the triangle-boundary circle")
{
    // 3 vertices, 3 edges (01, 02, 12), no triangles
    ChainComplexData cx;
    cx.ranks = {3, 3};
    BigMatrix d1(3, 3);
    d1.at(0, 0) = -1; d1.at(1, 0) = 1;   // edge 01
    d1.at(0, 1) = -1; d1.at(2, 1) = 1;   // edge 02
    d1.at(1, 2) = -1; d1.at(2, 2) = 1;   // edge 12
    cx.boundaries = {BigMatrix(0, 3), d1};

    const HomologyProfile h = homology_of_complex(cx);
    REQUIRE(h.groups.size() == 2);
    CHECK(h.groups[0].betti == 1);
    CHECK(h.groups[0].torsion.empty());
    CHECK(h.groups[1].betti == 1);
    CHECK(h.groups[1].torsion.empty());
    CHECK(h.euler_characteristic() == 0);
}

TEST_CASE("torsion from a degree-2 boundary")
{
    // C1 = Z --[2]--> C0 = Z
    ChainComplexData cx;
    cx.ranks = {1, 1};
    BigMatrix d1(1, 1);
    d1.at(0, 0) = 2;
    cx.boundaries = {BigMatrix(0, 1), d1};
    const HomologyProfile h = homology_of_complex(cx);
    CHECK(h.groups[0].betti == 0);
    CHECK(h.groups[0].torsion == std::vector<long long>{2});
    CHECK(h.groups[1].betti == 0);
    CHECK(h.groups[1].torsion.empty());
}

TEST_CASE("free complex with zero boundaries")
{
    ChainComplexData cx;
    cx.ranks = {1, 2, 1};
    cx.boundaries = {BigMatrix(0, 1), BigMatrix(1, 2), BigMatrix(2, 1)};
    const HomologyProfile h = homology_of_complex(cx);
    CHECK(h.groups[0].betti == 1);
    CHECK(h.groups[1].betti == 2);
    CHECK(h.groups[2].betti == 1);
    CHECK(h.to_string() == "(Z, Z^2, Z)");
}

TEST_CASE("NotAComplex is detected")
{
    ChainComplexData cx;
    cx.ranks = {1, 1, 1};
    BigMatrix d1(1, 1), d2(1, 1);
    d1.at(0, 0) = 1;
    d2.at(0, 0) = 1;
    cx.boundaries = {BigMatrix(0, 1), d1, d2};
    CHECK_THROWS_AS(homology_of_complex(cx), NotAComplex);
}

TEST_CASE("euler characteristic equals alternating rank sum")
{
    std::mt19937 rng(99);
    // random chain complexes with d1*d2 = 0 via d2 = kernel basis combos is
    // overkill; zero d2 plus random d1 already exercises the identity
    for (int trial = 0; trial < 20; ++trial) {
        ChainComplexData cx;
        std::uniform_int_distribution<std::size_t> dim(1, 5);
        cx.ranks = {dim(rng), dim(rng), dim(rng)};
        BigMatrix d1(cx.ranks[0], cx.ranks[1]);
        std::uniform_int_distribution<int> entry(-3, 3);
        for (std::size_t i = 0; i < d1.rows(); ++i)
            for (std::size_t j = 0; j < d1.cols(); ++j)
                d1.at(i, j) = entry(rng);
        cx.boundaries = {BigMatrix(0, cx.ranks[0]), d1, BigMatrix(cx.ranks[1], cx.ranks[2])};

        const HomologyProfile h = homology_of_complex(cx);
        long long chi_ranks = static_cast<long long>(cx.ranks[0]) -
                              static_cast<long long>(cx.ranks[1]) +
                              static_cast<long long>(cx.ranks[2]);
        CHECK(h.euler_characteristic() == chi_ranks);
    }
}
