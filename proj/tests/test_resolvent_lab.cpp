#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "qgs/resolvent_lab.hpp"
#include "qgs/sector_analysis.hpp"

using namespace qgs;

namespace {

Discretization dirichlet_grid(int n) {
    Graph g;
    GraphCoupling gc;
    oracle::dirichlet_edge(g, gc);
    return discretize(g, gc, n);
}

bool near_any(const std::vector<cplx>& list, cplx z, double tol) {
    return std::any_of(list.begin(), list.end(), [&](cplx e) { return std::abs(e - z) <= tol; });
}

}  // namespace

TEST_CASE("discretize bookkeeping") {
    auto d = dirichlet_grid(128);
    CHECK(d.size() == 128);
    CHECK(d.interior_rows.size() == 126);
    CHECK(d.constraint_rows == 2);
    CHECK(d.reduced.rows() == 126);

    Graph g;
    GraphCoupling gc;
    oracle::two_edge(g, gc, 1.0, 1.0, oracle::kirchhoff2());
    auto k = discretize(g, gc, 64);
    CHECK(k.size() == 128);
    CHECK(k.interior_rows.size() == 124);
    CHECK(k.constraint_rows == 4);

    oracle::dirichlet_edge(g, gc);
    g.edges[0].c = Polynomial::constant(1.0);
    CHECK_THROWS_AS(discretize(g, gc, 64), Error);
    try {
        discretize(g, gc, 64);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularPotentialUnsupported);
    }
    oracle::dirichlet_edge(g, gc);
    CHECK_THROWS_AS(discretize(g, gc, 8), Error);
}

TEST_CASE("constraint rows encode alpha and the inward derivative") {
    // (1 | 1) at both ends, applied to u(s) = 2 + 3 s:
    // minus end alpha = -1, beta = u'(-1) = 3; plus end alpha = 5, beta = -u'(1) = -3; both sums are 2
    Graph g;
    GraphCoupling gc;
    oracle::dirichlet_edge(g, gc);
    for (auto& c : gc.conditions) c.Cprime(0, 0) = 1.0;
    auto d = discretize(g, gc, 32);
    const int n = d.size();
    CVector u(n);
    for (int i = 0; i < n; ++i) u(i) = 2.0 + 3.0 * (-1.0 + i * d.h);
    const CMatrix sys(d.system);
    const CVector res = sys * u;
    // undo the unit-norm scaling through the known inward stencil weight 4 / (2h)
    const int r_minus = n - 2;
    const int r_plus = n - 1;
    const cplx scale_minus = (2.0 / d.h) / sys(r_minus, 1);
    const cplx scale_plus = (2.0 / d.h) / sys(r_plus, n - 2);
    CHECK(std::abs(res(r_minus) * scale_minus - 2.0) < 1e-10);
    CHECK(std::abs(res(r_plus) * scale_plus - 2.0) < 1e-10);
    CHECK(sys.row(r_minus).norm() == doctest::Approx(1.0));
    // interior rows annihilate linear functions
    for (int r : d.interior_rows) CHECK(std::abs(res(r)) < 1e-9);
}

TEST_CASE("sweep along the negative axis: selfadjoint distance formula") {
    auto d = dirichlet_grid(256);
    std::vector<double> r{10.0, 100.0, 1000.0};
    auto sr = sweep_ray(d, oracle::pi, r);
    REQUIRE(sr.points.size() == 3);
    for (const auto& p : sr.points) {
        CHECK(p.r_times_resnorm >= 0.75);  // 10 / (10 + pi^2 / 4) at r = 10
        CHECK(p.r_times_resnorm <= 1.1);
        const double exact = p.r / oracle::distance_to_dirichlet_spectrum(p.lambda);
        CHECK(p.r_times_resnorm == doctest::Approx(exact).epsilon(0.01));
    }
}

TEST_CASE("sweep along the positive axis between eigenvalues") {
    auto d = dirichlet_grid(256);
    const auto ev = discrete_eigenvalues(d);
    // midpoints between consecutive low eigenvalues
    std::vector<double> r;
    for (int k = 1; k <= 6; ++k) r.push_back(0.5 * (oracle::dirichlet_eigenvalue(k) + oracle::dirichlet_eigenvalue(k + 1)));
    auto sr = sweep_ray(d, 0.0, r);
    for (const auto& p : sr.points) {
        double dist = 1e300;
        for (cplx e : ev) dist = std::min(dist, std::abs(p.lambda - e));
        CHECK(p.sigma_min == doctest::Approx(dist).epsilon(1e-8));
        CHECK(p.sigma_min == doctest::Approx(oracle::distance_to_dirichlet_spectrum(p.lambda)).epsilon(0.01));
    }
    // r |R| grows like r between eigenvalues
    CHECK(sr.points.back().r_times_resnorm > 2.0 * sr.points.front().r_times_resnorm);
}

TEST_CASE("exact discrete eigenvalues are singular points of both systems") {
    auto d = dirichlet_grid(128);
    const auto ev = discrete_eigenvalues(d);
    for (int i : {0, 3, 20}) {
        const cplx lambda = ev[static_cast<std::size_t>(i)];
        const double scale = std::max(1.0, std::abs(lambda));
        CHECK(smallest_singular_value(d, lambda) < 1e-8 * scale);
        CHECK(constrained_smallest_singular_value(d, lambda) < 1e-8 * scale);
    }
}

TEST_CASE("lowest Dirichlet eigenvalue converges at second order") {
    const double exact = oracle::dirichlet_eigenvalue(1);
    const double e1 = std::abs(discrete_eigenvalues(dirichlet_grid(64))[0] - exact);
    const double e2 = std::abs(discrete_eigenvalues(dirichlet_grid(127))[0] - exact);  // h halves: n - 1 doubles
    CHECK(e1 / e2 > 3.5);
    CHECK(e1 / e2 < 4.5);
}

TEST_CASE("serial and parallel sweeps agree") {
    Graph g;
    GraphCoupling gc;
    oracle::two_edge(g, gc, 1.0, 2.0, oracle::kirchhoff2());
    auto d = discretize(g, gc, 64);
    auto r = log_spaced(1.0, 1e3, 9);
    auto a = sweep_ray(d, 2.0, r);
    auto b = sweep_ray_serial(d, 2.0, r);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        CHECK(a.points[i].r == b.points[i].r);
        CHECK(a.points[i].sigma_min == b.points[i].sigma_min);
    }
    std::vector<double> bad{1.0, 1.0};
    CHECK_THROWS_AS(sweep_ray(d, 0.0, bad), Error);
}

TEST_CASE("decay_verdict examples") {
    auto d = dirichlet_grid(256);
    const auto r = log_spaced(10.0, 1e4, 13);
    auto pi_sweep = sweep_ray(d, oracle::pi, r);
    CHECK(decay_verdict(pi_sweep).verdict == Decay::Decay);
    auto zero_sweep = sweep_ray(d, 0.0, r);
    CHECK(decay_verdict(zero_sweep).verdict == Decay::NoDecay);

    SweepResult one;
    one.points.push_back({10.0, -10.0, 10.0, 0.1, 1.0});
    CHECK_THROWS_AS(decay_verdict(one), Error);
    try {
        decay_verdict(one);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooFewSamples);
    }
    SweepResult short_range = sweep_ray(d, oracle::pi, log_spaced(10.0, 500.0, 5));
    CHECK_THROWS_AS(decay_verdict(short_range), Error);
}

TEST_CASE("decay_verdict on synthetic data") {
    auto make = [](double exponent, double wobble) {
        SweepResult sr;
        int i = 0;
        for (double r : log_spaced(1.0, 1e3, 16)) {
            const double res = std::pow(r, exponent) * (1.0 + wobble * ((i++ % 2) ? 1.0 : -0.5));
            sr.points.push_back({r, -r, 1.0 / res, res, r * res});
        }
        return sr;
    };
    CHECK(decay_verdict(make(-1.0, 0.0)).verdict == Decay::Decay);
    CHECK(decay_verdict(make(0.0, 0.0)).verdict == Decay::NoDecay);
    CHECK(decay_verdict(make(-2.0, 0.0)).verdict == Decay::Inconclusive);
    CHECK(decay_verdict(make(-0.4, 0.0)).verdict == Decay::NoDecay);    // r |R| spans 10^1.2 over two decades
    CHECK(decay_verdict(make(-0.6, 0.0)).verdict == Decay::Inconclusive);  // spread 10^0.8, slope between bands
}

TEST_CASE("CSV columns") {
    auto d = dirichlet_grid(32);
    auto sr = sweep_ray(d, oracle::pi, std::vector<double>{1.0, 2.0});
    std::ostringstream os;
    write_csv(os, sr);
    std::istringstream is(os.str());
    std::string header;
    std::getline(is, header);
    CHECK(header == "r,re_lambda,im_lambda,sigma_min,r_times_resnorm");
    int rows = 0;
    for (std::string line; std::getline(is, line);) ++rows;
    CHECK(rows == 2);
}

TEST_CASE("certified examples decay on the bisector and the sector edges") {
    Graph g;
    GraphCoupling gc;
    const auto r = log_spaced(10.0, 1e4, 13);
    const auto sector = Sector::from_degrees(180.0, 60.0);
    for (int example = 0; example < 2; ++example) {
        if (example == 0) oracle::dirichlet_edge(g, gc);
        else oracle::two_edge(g, gc, 1.0, 2.0, oracle::kirchhoff2());
        REQUIRE(analyze(g, gc, sector).certified);
        auto d = discretize(g, gc, 256);
        for (double theta : {sector.bisector_angle - sector.half_angle, sector.bisector_angle,
                             sector.bisector_angle + sector.half_angle})
            CHECK(decay_verdict(sweep_ray(d, theta, r)).verdict == Decay::Decay);
    }
}

TEST_CASE("truncated model: Robin eigenvalue at -1") {
    auto v = ModelVertexData::from_coefficients(0, {1.0});
    CouplingCondition cc;
    cc.C = CMatrix::Ones(1, 1);
    cc.Cprime = CMatrix::Ones(1, 1);
    auto ev = truncated_model_eigenvalues(v, cc, 40.0, 4000);
    REQUIRE_FALSE(ev.empty());
    CHECK(near_any(ev, -1.0, 1e-3));
}

TEST_CASE("truncated model: Kirchhoff has nothing off the rays") {
    auto v = ModelVertexData::from_coefficients(0, {1.0, 1.0});
    auto ev = truncated_model_eigenvalues(v, oracle::kirchhoff2(), 40.0, 2000);
    CHECK(ev.empty());
}

TEST_CASE("truncated model reproduces delta-type point spectra") {
    std::vector<cplx> ones{1.0, 1.0};
    auto v = ModelVertexData::from_coefficients(0, {1.0, 1.0});
    auto ev = truncated_model_eigenvalues(v, delta_type(2, 2.0, ones), 40.0, 4000);
    CHECK(near_any(ev, -1.0, 1e-3));

    // complex directions: each Point from the formula shows up, Empty sectors stay clean
    std::vector<cplx> a0{1.0, cplx(0.0, 2.0)};
    std::vector<cplx> cp{1.0, cplx(0.5, -0.3)};
    const cplx nu(1.2, 0.4);
    auto w = ModelVertexData::from_coefficients(0, a0);
    auto found = truncated_model_eigenvalues(w, delta_type(2, nu, cp), 40.0, 4000);
    std::vector<cplx> points;
    for (const auto& sec : bgres_sectors(w)) {
        auto ds = delta_spectrum(w, nu, cp, sec);
        if (ds.kind == SpectrumKind::Point) points.push_back(ds.lambda);
    }
    REQUIRE_FALSE(points.empty());
    for (cplx p : points) CHECK(near_any(found, p, 1e-3));
    for (cplx f : found) CHECK(near_any(points, f, 1e-3));
}
