#include <doctest.h>

#include <fstream>

#include "oracles.hpp"
#include "qgs/problem_io.hpp"

using namespace qgs;

namespace {

const char* kDirichlet = R"({
  "edges": [{"id": 0, "a": [[1, 0]], "b": [], "c": []}],
  "vertices": [{"id": 0, "endpoints": ["e0-"]}, {"id": 1, "endpoints": ["e0+"]}],
  "couplings": [
    {"vertex": 0, "C": [[[1, 0]]], "Cprime": [[[0, 0]]]},
    {"vertex": 1, "C": [[[1, 0]]], "Cprime": [[[0, 0]]]}
  ],
  "sector": {"bisector_deg": 180, "half_angle_deg": 60}
}
)";

std::string error_message(std::string_view text) {
    try {
        parse_problem(text);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ParseError);
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("parse a Dirichlet edge") {
    auto p = parse_problem(kDirichlet);
    REQUIRE(p.graph.edges.size() == 1);
    CHECK(p.graph.edges[0].a == Polynomial::constant(1.0));
    REQUIRE(p.graph.vertices.size() == 2);
    CHECK(p.graph.vertices[1].endpoints[0].side == Side::plus);
    REQUIRE(p.sector);
    CHECK(p.sector->half_angle_deg == 60.0);
    CHECK(p.coupling.at(1).C(0, 0) == cplx(1.0));
}

TEST_CASE("syntax errors carry line and column") {
    std::string broken = kDirichlet;
    broken.replace(broken.find("\"b\": []"), 7, "\"b\": [}");
    const auto msg = error_message(broken);
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("column") != std::string::npos);

    const auto truncated = error_message(std::string(kDirichlet).substr(0, 120));
    CHECK(truncated.find("line") != std::string::npos);
}

TEST_CASE("structural errors name the offending path") {
    std::string no_a = kDirichlet;
    no_a.replace(no_a.find("\"a\""), 3, "\"q\"");
    CHECK(error_message(no_a).find("$.edges[0]") != std::string::npos);

    std::string bad_ep = kDirichlet;
    bad_ep.replace(bad_ep.find("e0-"), 3, "x0-");
    CHECK(error_message(bad_ep).find("bad endpoint") != std::string::npos);

    std::string ragged = kDirichlet;
    ragged.replace(ragged.find("[[[1, 0]]]"), 10, "[[[1, 0], [2]]]");
    CHECK_FALSE(error_message(ragged).empty());
}

TEST_CASE("round trip keeps raw and delta-type couplings") {
    Problem p;
    std::vector<cplx> cp{cplx(1.0, 0.25), -0.5};
    oracle::two_edge(p.graph, p.coupling, cplx(1.0, 0.1), 2.0, delta_type(2, cplx(2.0, -1.0), cp));
    p.graph.edges[0].b = Polynomial({0.1, cplx(0.0, 1.0 / 3.0)});
    p.graph.edges[1].c = Polynomial({0.7});
    p.sector = SectorSpec{200.5, 33.25};

    const auto text = serialize_problem(p);
    const auto q = parse_problem(text);
    CHECK(q.graph == p.graph);
    CHECK(q.sector == p.sector);
    REQUIRE(q.coupling.conditions.size() == p.coupling.conditions.size());
    for (std::size_t i = 0; i < q.coupling.conditions.size(); ++i) {
        CHECK(q.coupling.conditions[i].vertex == p.coupling.conditions[i].vertex);
        CHECK(q.coupling.conditions[i].C == p.coupling.conditions[i].C);
        CHECK(q.coupling.conditions[i].Cprime == p.coupling.conditions[i].Cprime);
        CHECK(q.coupling.conditions[i].delta == p.coupling.conditions[i].delta);
    }
    CHECK(serialize_problem(q) == text);
    CHECK(text.find("\"delta\"") != std::string::npos);
}

TEST_CASE("reports are deterministic and self-describing") {
    auto p = parse_problem(kDirichlet);
    Tolerances tol;
    tol.samples_per_sector = 9;
    const auto a = report_json(analyze(p.graph, p.coupling, p.sector->sector(), tol), tol).dump(2);
    const auto b = report_json(analyze(p.graph, p.coupling, p.sector->sector(), tol), tol).dump(2);
    CHECK(a == b);
    auto j = nlohmann::json::parse(a);
    CHECK(j["version"] == std::string(kVersion));
    CHECK(j["tolerances"]["samples_per_sector"] == 9);
    CHECK(j["certified"] == true);
    CHECK(j["vertices"][0]["limiting_domain"]["ell"] == 0);
}
