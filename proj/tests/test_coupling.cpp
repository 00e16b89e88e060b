#include <doctest.h>

#include "oracles.hpp"
#include "qgs/coupling.hpp"

using namespace qgs;

namespace {

CouplingCondition scalar(cplx c, cplx cp) {
    CouplingCondition cc;
    cc.C = CMatrix::Constant(1, 1, c);
    cc.Cprime = CMatrix::Constant(1, 1, cp);
    return cc;
}

CouplingCondition random_condition(std::mt19937& rng, int k) {
    return CouplingCondition::from_joined(0, oracle::random_matrix(rng, k, 2 * k));
}

}  // namespace

TEST_CASE("admissible") {
    CHECK(admissible(oracle::dirichlet(0, 2)));
    CHECK_FALSE(admissible(scalar(0.0, 0.0)));
    std::vector<cplx> ones(3, 1.0);
    auto kirchhoff = delta_type(3, 0.0, ones);
    CHECK(admissible(kirchhoff));
    CHECK(oracle::rank_by_elimination(kirchhoff.joined()) == 3);

    CouplingCondition bad;
    bad.C = CMatrix::Identity(2, 2);
    bad.Cprime = CMatrix::Zero(2, 3);
    CHECK_THROWS_AS(admissible(bad), Error);
}

TEST_CASE("admissible agrees with rank by elimination on random low-rank data") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const int k = 1 + trial % 4;
        const int r = trial % (k + 1);
        CMatrix m = oracle::random_matrix(rng, k, r) * oracle::random_matrix(rng, r, 2 * k);
        if (r == 0) m = CMatrix::Zero(k, 2 * k);
        auto cc = CouplingCondition::from_joined(0, m);
        CHECK(admissible(cc) == (oracle::rank_by_elimination(m) == k));
    }
}

TEST_CASE("equivalent") {
    CHECK(equivalent(scalar(1.0, 1.0), scalar(2.0, 2.0)));
    CHECK_FALSE(equivalent(scalar(1.0, 0.0), scalar(0.0, 1.0)));
    CHECK_THROWS_AS(equivalent(scalar(1.0, 0.0), oracle::dirichlet(0, 2)), Error);

    std::mt19937 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const int k = 1 + trial % 5;
        auto cc = random_condition(rng, k);
        CMatrix m = oracle::random_matrix(rng, k, k);
        CHECK(equivalent(cc, left_multiply(m, cc)));
        // and against the Gram-Schmidt projector oracle
        CHECK((oracle::projector(cc.joined()) - oracle::projector(left_multiply(m, cc).joined())).norm() < 1e-9);
    }
}

TEST_CASE("equivalence relation on random conditions") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = 2 + trial % 3;
        auto a = random_condition(rng, k);
        auto b = left_multiply(oracle::random_matrix(rng, k, k), a);
        auto c = left_multiply(oracle::random_matrix(rng, k, k), b);
        auto other = random_condition(rng, k);
        CHECK(equivalent(a, a));
        CHECK(equivalent(a, b) == equivalent(b, a));
        CHECK(equivalent(a, c));
        CHECK(equivalent(c, a));
        CHECK_FALSE(equivalent(a, other));
        CHECK(equivalent(a, other) == equivalent(other, a));
    }
}

TEST_CASE("apply") {
    CVector alpha(2), beta(2);
    alpha << 1.0, 2.0;
    beta << 5.0, 7.0;
    CHECK((apply(oracle::dirichlet(0, 2), alpha, beta) - alpha).norm() == 0.0);

    auto k2 = oracle::kirchhoff2();
    alpha << 1.0, 1.0;
    beta << 3.0, -3.0;
    CHECK(apply(k2, alpha, beta).norm() == 0.0);

    CVector a1(1), b1(1);
    a1 << 1.0;
    b1 << -1.0;
    CHECK(apply(scalar(1.0, 1.0), a1, b1).norm() == 0.0);
}

TEST_CASE("apply is left-equivariant") {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const int k = 1 + trial % 4;
        auto cc = random_condition(rng, k);
        CMatrix m = oracle::random_matrix(rng, k, k);
        CVector alpha = oracle::random_matrix(rng, k, 1);
        CVector beta = oracle::random_matrix(rng, k, 1);
        CVector lhs = apply(left_multiply(m, cc), alpha, beta);
        CVector rhs = m * apply(cc, alpha, beta);
        CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, rhs.norm()));
    }
}

TEST_CASE("delta_type layout") {
    std::vector<cplx> ones{1.0, 1.0};
    auto k2 = delta_type(2, 0.0, ones);
    CHECK(k2.joined() == oracle::kirchhoff2().joined());

    std::vector<cplx> one{1.0};
    auto r = delta_type(1, 1.0, one);
    CHECK(r.C(0, 0) == cplx(1.0));
    CHECK(r.Cprime(0, 0) == cplx(1.0));

    std::vector<cplx> cp{1.0, 0.0, 1.0};
    auto d = delta_type(3, 2.0, cp);
    CMatrix expected(3, 6);
    expected << 1, -1, 0, 0, 0, 0,
                0, 1, -1, 0, 0, 0,
                2, 0, 0, 1, 0, 1;
    CHECK(d.joined() == expected);
    REQUIRE(detect_delta(d));
    CHECK(detect_delta(d)->nu == cplx(2.0));

    std::vector<cplx> zeros(3, 0.0);
    CHECK_THROWS_AS(delta_type(3, 0.0, zeros), Error);
    try {
        delta_type(3, 0.0, zeros);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AllZeroParameters);
    }
}

TEST_CASE("delta_type is admissible for nonzero parameters") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const int k = 1 + trial % 5;
        std::vector<cplx> cp(static_cast<std::size_t>(k), 0.0);
        cplx nu = 0.0;
        // sparse parameter vectors exercise the degenerate layouts
        if (trial % 3 == 0) nu = oracle::random_complex(rng);
        else cp[static_cast<std::size_t>(trial % k)] = oracle::random_complex(rng);
        CHECK(admissible(delta_type(k, nu, cp)));
    }
}

TEST_CASE("detect_delta ignores raw matrices of other shapes") {
    std::mt19937 rng(1);
    auto cc = random_condition(rng, 3);
    CHECK_FALSE(detect_delta(cc));
    std::vector<cplx> cp{1.0, 2.0};
    auto raw = delta_type(2, 3.0, cp);
    raw.delta.reset();
    auto found = detect_delta(raw);
    REQUIRE(found);
    CHECK(found->cprime == cp);
}

TEST_CASE("permute_columns") {
    std::mt19937 rng(17);
    auto cc = random_condition(rng, 3);
    std::vector<int> perm{2, 0, 1};
    auto p = permute_columns(cc, perm);
    for (int j = 0; j < 3; ++j) {
        CHECK(p.C.col(j) == cc.C.col(perm[static_cast<std::size_t>(j)]));
        CHECK(p.Cprime.col(j) == cc.Cprime.col(perm[static_cast<std::size_t>(j)]));
    }
}
