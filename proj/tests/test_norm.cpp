#include "doctest.h"

#include "parex/norm.hpp"

using namespace parex;

namespace {

ParamCube cube_of(const OrbitCat& t, size_t mor) {
    GMap w = t.gmap(mor);
    return build_cube(t, t.cat().dst(mor), w);
}

size_t first_hom(const OrbitCat& t, size_t i, size_t j) { return t.cat().hom(i, j).at(0); }

// slices over the point have exactly one level per orbit object
size_t level_of(const ParamCube& cube, size_t obj) {
    const auto& objs = cube.poset.base->objects;
    for (size_t o = 0; o < objs.size(); o++)
        if (objs[o].first == obj) return o;
    REQUIRE(false);
    return 0;
}

std::vector<size_t> hranks(const ChainComplex& x) { return homology(x).rank; }

std::vector<size_t> scaled(std::vector<size_t> r, size_t k) {
    for (auto& v : r) v *= k;
    return r;
}

} // namespace

TEST_CASE("fold norms over the trivial group are isomorphisms") {
    auto g = FiniteGroup::trivial();
    auto t = OrbitCat::build(&g);
    Rng rng = Rng::for_property(1800, "fold norm");
    for (size_t n : {2u, 3u}) {
        std::vector<size_t> to_pt(n, 0);
        auto w = std::make_shared<const GSet>(GSet::trivial_points(&g, n));
        ParamCube cube = build_cube(t, 0, w, to_pt);
        const FinCat* c = &cube.poset.base->cat;
        REQUIRE(c->objects() == 1);
        for (int i = 0; i < 5; i++) {
            ChainSystem x = random_system(rng, c, 8);
            NormData nd = norm_map(cube, x);
            CHECK(nd.sections == std::vector<size_t>{n});
            CHECK(nd.factors == std::vector<size_t>{n});
            // the coproduct and product of a fold are plain direct sums
            for (int d = kChainLo; d <= kChainHi; d++) {
                CHECK(nd.lower.at(0).dim(d) == n * x.at(0).dim(d));
                CHECK(nd.upper.at(0).dim(d) == n * x.at(0).dim(d));
            }
            CHECK(nd.all_qis);
        }
    }
}

TEST_CASE("free double cover separates the two kan extensions") {
    auto g = FiniteGroup::named("C2");
    auto t = OrbitCat::build(&g);
    ParamCube cube = cube_of(t, first_hom(t, 0, 1));
    const FinCat* c = &cube.poset.base->cat;
    size_t lfree = level_of(cube, 0), lfix = level_of(cube, 1);

    ChainSystem unit = constant_system(c, ChainComplex::sphere(0));
    NormData nd = norm_map(cube, unit);
    CHECK(nd.sections[lfree] == 2);
    CHECK(nd.sections[lfix] == 0);
    CHECK(nd.factors[lfree] == 2);
    CHECK(nd.factors[lfix] == 1);

    // no section exists at the fixed level: the coproduct is empty there
    CHECK(nd.lower.at(lfix).total_dim() == 0);
    // the product still sees the free level through the unique orbit
    CHECK(hranks(nd.upper.at(lfix)) == hranks(unit.at(lfree)));
    CHECK(nd.qis[lfree]);
    CHECK_FALSE(nd.qis[lfix]);
    CHECK_FALSE(nd.all_qis);
}

TEST_CASE("free triple cover separates the extensions the same way") {
    auto g = FiniteGroup::named("C3");
    auto t = OrbitCat::build(&g);
    ParamCube cube = cube_of(t, first_hom(t, 0, 1));
    const FinCat* c = &cube.poset.base->cat;
    size_t lfree = level_of(cube, 0), lfix = level_of(cube, 1);

    ChainSystem unit = constant_system(c, ChainComplex::sphere(0));
    NormData nd = norm_map(cube, unit);
    CHECK(nd.sections == std::vector<size_t>{3, 0});
    CHECK(nd.factors == std::vector<size_t>{3, 1});
    CHECK(nd.lower.at(lfix).total_dim() == 0);
    CHECK(nd.qis[lfree]);
    CHECK_FALSE(nd.qis[lfix]);
}

TEST_CASE("kan extension homology matches the orbit bookkeeping") {
    auto g = FiniteGroup::named("C2");
    auto t = OrbitCat::build(&g);
    ParamCube cube = cube_of(t, first_hom(t, 0, 1));
    const FinCat* c = &cube.poset.base->cat;
    size_t lfree = level_of(cube, 0), lfix = level_of(cube, 1);

    Rng rng = Rng::for_property(1801, "norm bookkeeping");
    for (int i = 0; i < 5; i++) {
        ChainSystem x = random_system(rng, c, 10);
        NormData nd = norm_map(cube, x);
        // summands and factors of the free level are two copies of the value
        CHECK(hranks(nd.lower.at(lfree)) == scaled(hranks(x.at(lfree)), 2));
        CHECK(hranks(nd.upper.at(lfree)) == scaled(hranks(x.at(lfree)), 2));
        // the fixed level sees the free value once on the product side only
        CHECK(nd.lower.at(lfix).total_dim() == 0);
        CHECK(hranks(nd.upper.at(lfix)) == hranks(x.at(lfree)));
        CHECK(nd.qis[lfree]);
        CHECK(nd.qis[lfix] == (homology(x.at(lfree)).total_rank() == 0));
    }
}

TEST_CASE("identity cover has fixed structure beyond the thin engine") {
    auto g = FiniteGroup::named("C2");
    auto t = OrbitCat::build(&g);
    ParamCube cube = cube_of(t, t.cat().identity(1));
    ChainSystem x = constant_system(&cube.poset.base->cat, ChainComplex::sphere(0));
    CHECK_THROWS_WITH(norm_map(cube, x), "skeletonize requires a thin category");
}

TEST_CASE("norm rejects a system over a different slice") {
    auto g = FiniteGroup::named("C2");
    auto t = OrbitCat::build(&g);
    ParamCube cube = cube_of(t, first_hom(t, 0, 1));
    ParamCube other = cube_of(t, first_hom(t, 0, 1));
    ChainSystem x = constant_system(&other.poset.base->cat, ChainComplex::sphere(0));
    CHECK_THROWS_WITH(norm_map(cube, x), "coefficient system lives over a different slice");
}

TEST_CASE("empty cover norms through zero") {
    auto g = FiniteGroup::named("C2");
    auto t = OrbitCat::build(&g);
    auto w = std::make_shared<const GSet>(GSet::trivial_points(&g, 0));
    ParamCube cube = build_cube(t, 1, w, {});
    const FinCat* c = &cube.poset.base->cat;
    ChainSystem x = constant_system(c, ChainComplex::sphere(0));
    NormData nd = norm_map(cube, x);
    for (size_t v = 0; v < c->objects(); v++) {
        CHECK(nd.sections[v] == 0);
        CHECK(nd.factors[v] == 0);
        CHECK(nd.lower.at(v).total_dim() == 0);
        CHECK(nd.upper.at(v).total_dim() == 0);
    }
    CHECK(nd.all_qis);
}

TEST_CASE("coproduct and product cubes over the trivial fold") {
    auto g = FiniteGroup::trivial();
    auto t = OrbitCat::build(&g);
    std::vector<size_t> to_pt(2, 0);
    auto w = std::make_shared<const GSet>(GSet::trivial_points(&g, 2));
    ParamCube cube = build_cube(t, 0, w, to_pt);
    const FinCat* c = &cube.poset.base->cat;
    Rng rng = Rng::for_property(1900, "fold cubes");
    for (int i = 0; i < 5; i++) {
        ChainSystem x = random_system(rng, c, 8);
        AlphaBeta ab = alpha_beta_cubes(cube, x);
        REQUIRE(ab.shape->objects.size() == 4);
        for (int n = kChainLo; n <= kChainHi; n++) {
            size_t d = x.at(0).dim(n);
            CHECK(ab.alpha.at(ab.shape->index(0, 0)).dim(n) == 2 * d);
            CHECK(ab.beta.at(ab.shape->index(0, 0)).dim(n) == 2 * d);
            CHECK(ab.alpha.at(ab.shape->index(0, 1)).dim(n) == d);
            CHECK(ab.beta.at(ab.shape->index(0, 2)).dim(n) == d);
        }
        CHECK(ab.alpha.at(ab.shape->index(0, 3)).total_dim() == 0);
        CHECK(ab.beta.at(ab.shape->index(0, 3)).total_dim() == 0);
        for (bool b : ab.aleph_qis) CHECK(b);
        CHECK(ab.alpha_cocartesian);
        CHECK(ab.beta_cartesian);
    }
}

TEST_CASE("componentwise norm fails exactly at the collapsed fixed level") {
    auto g = FiniteGroup::named("C2");
    auto t = OrbitCat::build(&g);
    ParamCube cube = cube_of(t, first_hom(t, 0, 1));
    const FinCat* c = &cube.poset.base->cat;
    size_t lfree = level_of(cube, 0), lfix = level_of(cube, 1);
    ChainSystem x = constant_system(c, ChainComplex::sphere(0));
    AlphaBeta ab = alpha_beta_cubes(cube, x);
    NormData nd = norm_map(cube, x);
    for (size_t o = 0; o < ab.shape->objects.size(); o++)
        CHECK(ab.aleph_qis[o] == (o != ab.shape->index(lfix, 0)));
    // the bottom faces of the comparison cubes reproduce the kan extensions
    for (size_t v : {lfree, lfix}) {
        CHECK(hranks(ab.alpha.at(ab.shape->index(v, 0))) == hranks(nd.lower.at(v)));
        CHECK(hranks(ab.beta.at(ab.shape->index(v, 0))) == hranks(nd.upper.at(v)));
        CHECK(ab.aleph_qis[ab.shape->index(v, 0)] == nd.qis[v]);
    }
    CHECK(ab.alpha_cocartesian);
    CHECK(ab.beta_cartesian);
}

TEST_CASE("free triple cover comparison fails only at the fixed level") {
    auto g = FiniteGroup::named("C3");
    auto t = OrbitCat::build(&g);
    ParamCube cube = cube_of(t, first_hom(t, 0, 1));
    const FinCat* c = &cube.poset.base->cat;
    size_t lfix = level_of(cube, 1);
    ChainSystem x = constant_system(c, ChainComplex::sphere(0));
    AlphaBeta ab = alpha_beta_cubes(cube, x);
    for (size_t o = 0; o < ab.shape->objects.size(); o++)
        CHECK(ab.aleph_qis[o] == (o != ab.shape->index(lfix, 0)));
    CHECK(ab.alpha_cocartesian);
    CHECK(ab.beta_cartesian);
}

TEST_CASE("comparison cubes track the kan extensions on random systems") {
    auto g = FiniteGroup::named("C2");
    auto t = OrbitCat::build(&g);
    ParamCube cube = cube_of(t, first_hom(t, 0, 1));
    const FinCat* c = &cube.poset.base->cat;
    Rng rng = Rng::for_property(1901, "cube vs kan");
    for (int i = 0; i < 5; i++) {
        ChainSystem x = random_system(rng, c, 8);
        AlphaBeta ab = alpha_beta_cubes(cube, x);
        NormData nd = norm_map(cube, x);
        for (size_t v = 0; v < c->objects(); v++) {
            CHECK(hranks(ab.alpha.at(ab.shape->index(v, 0))) == hranks(nd.lower.at(v)));
            CHECK(hranks(ab.beta.at(ab.shape->index(v, 0))) == hranks(nd.upper.at(v)));
            CHECK(ab.aleph_qis[ab.shape->index(v, 0)] == nd.qis[v]);
        }
        CHECK(ab.alpha_cocartesian);
        CHECK(ab.beta_cartesian);
    }
}

TEST_CASE("zero coefficients give zero comparison cubes") {
    auto g = FiniteGroup::named("C2");
    auto t = OrbitCat::build(&g);
    ParamCube cube = cube_of(t, first_hom(t, 0, 1));
    ChainSystem x = system_zero(&cube.poset.base->cat);
    AlphaBeta ab = alpha_beta_cubes(cube, x);
    for (size_t o = 0; o < ab.shape->objects.size(); o++) {
        CHECK(ab.alpha.at(o).total_dim() == 0);
        CHECK(ab.beta.at(o).total_dim() == 0);
        CHECK(ab.aleph_qis[o]);
    }
    CHECK(ab.alpha_cocartesian);
    CHECK(ab.beta_cartesian);
}

TEST_CASE("identity cover gives isomorphic comparison cubes") {
    auto g = FiniteGroup::named("C2");
    auto t = OrbitCat::build(&g);
    ParamCube cube = cube_of(t, t.cat().identity(1));
    ChainSystem x = constant_system(&cube.poset.base->cat, ChainComplex::sphere(0));
    AlphaBeta ab = alpha_beta_cubes(cube, x);
    for (bool b : ab.aleph_qis) CHECK(b);
    CHECK(ab.alpha_cocartesian);
    CHECK(ab.beta_cartesian);
}

TEST_CASE("cube validation rejects tampered data") {
    auto g = FiniteGroup::trivial();
    auto t = OrbitCat::build(&g);
    std::vector<size_t> to_pt(2, 0);
    auto w = std::make_shared<const GSet>(GSet::trivial_points(&g, 2));
    ParamCube cube = build_cube(t, 0, w, to_pt);
    ChainSystem x = constant_system(&cube.poset.base->cat, ChainComplex::sphere(0));
    AlphaBeta ab = alpha_beta_cubes(cube, x);
    const FinCat& k = ab.shape->cat;

    std::vector<ChainComplex> vals;
    std::vector<ChainMap> maps;
    for (size_t o = 0; o < k.objects(); o++) vals.push_back(ab.alpha.at(o));
    for (size_t m = 0; m < k.morphisms(); m++) maps.push_back(ab.alpha.map(m));
    maps[k.identity(ab.shape->index(0, 0))].at(0) = QMat(2, 2);
    CHECK_THROWS_WITH(CubeCh::build(ab.shape, vals, maps),
                      "cube identity edge is not the identity");

    CubeMap bad = ab.aleph;
    bad.at[ab.shape->index(0, 0)] = chain_map_zero(ab.alpha.at(ab.shape->index(0, 0)),
                                                   ab.beta.at(ab.shape->index(0, 0)));
    CHECK_THROWS_WITH(validate_cube_map(ab.alpha, ab.beta, bad, "tampered"),
                      "cube map is not natural");
}
