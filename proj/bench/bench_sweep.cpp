// Serial vs OpenMP resolvent sweep on a two-edge Kirchhoff graph.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "qgs/resolvent_lab.hpp"

using namespace qgs;

namespace {

Graph two_edge(GraphCoupling& gc) {
    Graph g;
    g.edges = {{0, Polynomial::constant(1.0), {}, {}}, {1, Polynomial::constant(2.0), {}, {}}};
    g.vertices = {{0, {{0, Side::plus}, {1, Side::minus}}}, {1, {{0, Side::minus}}}, {2, {{1, Side::plus}}}};
    std::vector<cplx> ones{1.0, 1.0};
    auto dir = [](int v) {
        CouplingCondition c;
        c.vertex = v;
        c.C = CMatrix::Identity(1, 1);
        c.Cprime = CMatrix::Zero(1, 1);
        return c;
    };
    gc.conditions = {delta_type(2, 0.0, ones, 0), dir(1), dir(2)};
    return g;
}

template <class F>
double seconds(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    const int n = argc > 1 ? std::atoi(argv[1]) : 256;
    const int points = argc > 2 ? std::atoi(argv[2]) : 13;
    GraphCoupling gc;
    const Graph g = two_edge(gc);
    const auto d = discretize(g, gc, n);
    const auto r = log_spaced(10.0, 1e4, points);

    SweepResult serial;
    SweepResult parallel;
    const double ts = seconds([&] { serial = sweep_ray_serial(d, 3.14159265358979323846, r); });
    const double tp = seconds([&] { parallel = sweep_ray(d, 3.14159265358979323846, r); });
    double diff = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
        diff = std::max(diff, std::abs(serial.points[i].sigma_min - parallel.points[i].sigma_min));
    std::printf("n=%d points=%d threads=%d serial %.3f s parallel %.3f s speedup %.2f max|diff| %.1e\n", n, points,
                omp_get_max_threads(), ts, tp, ts / tp, diff);
    return diff == 0.0 ? 0 : 1;
}
