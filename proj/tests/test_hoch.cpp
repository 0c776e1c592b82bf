#include "doctest.h"

#include "parex/chain.hpp"
#include "parex/hocolim.hpp"

#include <memory>

using namespace parex;

namespace {

constexpr uint64_t kSeed = 0x9e3779b97f4a7c15ull;

std::shared_ptr<const FinPoset> make_poset(std::vector<int64_t> ids,
                                           std::vector<std::pair<int64_t, int64_t>> covers) {
    return std::make_shared<const FinPoset>(FinPoset::from_covers(std::move(ids), covers));
}

// square with the top removed: 0 < 1, 0 < 2
std::shared_ptr<const FinPoset> punctured_square() {
    return make_poset({0, 1, 2}, {{0, 1}, {0, 2}});
}

std::vector<size_t> homology_profile(const ChainComplex& x) {
    HomologyData h = homology(x);
    return h.rank;
}

} // namespace

TEST_CASE("chain complexes validate their differentials") {
    CHECK_THROWS_WITH_AS(ChainComplex::build({{42, 1}}, {}),
                         "chain degree outside the bounded window", InputError);

    std::map<int, size_t> dims{{0, 1}, {1, 1}, {2, 1}};
    std::map<int, QMat> d;
    d[1] = QMat::identity(1);
    d[2] = QMat::identity(1);
    CHECK_THROWS_WITH_AS(ChainComplex::build(dims, d),
                         "differential does not square to zero", InputError);

    d[2] = QMat::identity(2);
    CHECK_THROWS_WITH_AS(ChainComplex::build(dims, d),
                         "differential has the wrong shape", InputError);

    std::map<int, size_t> big{{0, kChainTotalCap + 1}};
    CHECK_THROWS_WITH_AS(ChainComplex::build(big, {}),
                         "chain complex exceeds the total dimension cap", InputError);
}

TEST_CASE("spheres, discs and shifts have the expected homology") {
    ChainComplex s = ChainComplex::sphere(2, 3);
    CHECK(s.dim(2) == 3);
    CHECK(s.lo() == 2);
    CHECK(s.hi() == 2);
    CHECK(homology(s).rank_at(2) == 3);
    CHECK(homology(s).total_rank() == 3);

    ChainComplex dsc = ChainComplex::disc(1);
    CHECK(homology(dsc).total_rank() == 0);

    ChainComplex sh = dsc.shifted(2);
    CHECK(sh.dim(3) == 1);
    CHECK(sh.dim(2) == 1);
    CHECK(sh.d(3) == QMat::identity(1));
    CHECK(homology(sh).total_rank() == 0);
    CHECK(sh.shifted(-2) == dsc);

    ChainComplex top = ChainComplex::sphere(kChainHi);
    CHECK_THROWS_WITH_AS(top.shifted(1), "shift leaves the bounded degree window", InputError);

    Rng rng(kSeed);
    for (int t = 0; t < 10; t++) {
        ChainComplex x = random_complex(rng, -2, 3, 3);
        ChainComplex y = x.shifted(1);
        for (int n = kChainLo; n < kChainHi; n++) {
            CHECK(y.dim(n + 1) == x.dim(n));
            CHECK(homology(y).rank_at(n + 1) == homology(x).rank_at(n));
        }
    }
}

TEST_CASE("dualizing is an involution that flips homology degrees") {
    Rng rng = Rng::for_property(kSeed, "dualize");
    for (int t = 0; t < 20; t++) {
        ChainComplex x = random_complex(rng, -3, 3, 3);
        ChainComplex xd = dualize(x);
        CHECK(dualize(xd) == x);
        HomologyData hx = homology(x), hd = homology(xd);
        for (int n = -3; n <= 3; n++) CHECK(hx.rank_at(n) == hd.rank_at(-n));

        ChainComplex y = random_complex(rng, -3, 3, 3);
        ChainMap f = random_chain_map(rng, x, y);
        ChainMap fd = dualize_map(f);
        validate_chain_map(dualize(y), dualize(x), fd, "dual map");
        // contravariance on a composite
        ChainComplex z = random_complex(rng, -3, 3, 3);
        ChainMap g = random_chain_map(rng, y, z);
        CHECK(cm_is_zero(cm_sub(dualize_map(compose(g, f)),
                                compose(dualize_map(f), dualize_map(g)))));
    }
}

TEST_CASE("mapping cones detect quasi-isomorphisms") {
    Rng rng = Rng::for_property(kSeed, "cones");
    for (int t = 0; t < 20; t++) {
        ChainComplex x = random_complex(rng, -2, 3, 3);
        ChainMap id = chain_map_identity(x);
        CHECK(homology(mapping_cone(x, x, id)).total_rank() == 0);
        CHECK(qis_via_cone(x, x, id));
        CHECK(is_qis(x, x, id));

        ChainComplex y = random_complex(rng, -2, 3, 3);
        ChainMap f = random_chain_map(rng, x, y);
        CHECK(is_qis(x, y, f) == qis_via_cone(x, y, f));

        // zero map to a complex with homology is never a qis
        if (homology(y).total_rank() > 0) {
            CHECK_FALSE(is_qis(x, y, chain_map_zero(x, y)));
        }
    }
}

TEST_CASE("nullhomotopies are found exactly when maps bound") {
    Rng rng = Rng::for_property(kSeed, "homotopy");
    ChainComplex dsc = ChainComplex::disc(1);
    auto h = nullhomotopy(dsc, dsc, chain_map_identity(dsc));
    REQUIRE(h.has_value());

    ChainComplex s = ChainComplex::sphere(0);
    CHECK_FALSE(nullhomotopy(s, s, chain_map_identity(s)).has_value());

    for (int t = 0; t < 10; t++) {
        ChainComplex x = random_complex(rng, -2, 2, 3);
        ChainComplex y = random_complex(rng, -2, 2, 3);
        ChainMap f = random_chain_map(rng, x, y);
        auto hh = nullhomotopy(x, y, f);
        if (hh.has_value()) {
            // d h + h d really equals f
            for (int n = kChainLo; n <= kChainHi; n++) {
                QMat lhs(y.dim(n), x.dim(n));
                if (chain_degree_ok(n + 1)) lhs = y.d(n + 1) * hh->at(n);
                if (chain_degree_ok(n - 1)) lhs = lhs + hh->at(n - 1) * x.d(n);
                CHECK(lhs == f.at(n));
            }
            CHECK(chain_homotopic(x, y, f, chain_map_zero(x, y)));
        } else {
            // maps that do not bound are nonzero on homology somewhere
            HomologyData hx = homology(x), hy = homology(y);
            bool nonzero = false;
            for (int n = kChainLo; n <= kChainHi; n++)
                if (!induced_on_homology(hx, hy, f, n).is_zero()) nonzero = true;
            CHECK(nonzero);
        }
    }
}

TEST_CASE("random chain maps commute and direct sums split") {
    Rng rng = Rng::for_property(kSeed, "sums");
    for (int t = 0; t < 10; t++) {
        ChainComplex a = random_complex(rng, -2, 3, 3);
        ChainComplex b = random_complex(rng, -2, 3, 3);
        SumData s = direct_sum_data(a, b);
        CHECK(s.sum.total_dim() == a.total_dim() + b.total_dim());
        CHECK(cm_is_zero(cm_sub(compose(s.pr1, s.in1), chain_map_identity(a))));
        CHECK(cm_is_zero(cm_sub(compose(s.pr2, s.in2), chain_map_identity(b))));
        CHECK(cm_is_zero(compose(s.pr2, s.in1)));
        CHECK(cm_is_zero(cm_sub(cm_add(compose(s.in1, s.pr1), compose(s.in2, s.pr2)),
                                chain_map_identity(s.sum))));
        CHECK(homology(s.sum).total_rank() ==
              homology(a).total_rank() + homology(b).total_rank());
    }
}

TEST_CASE("diagram composites must agree along every cover path") {
    auto shape = make_poset({0, 1, 2, 3}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    ChainComplex q = ChainComplex::sphere(0);
    std::vector<ChainComplex> vals{q, q, q, q};
    ChainDiagram::CoverMaps cm;
    for (auto& [lo, hi] : shape->covers()) cm[{lo, hi}] = chain_map_identity(q);
    ChainDiagram d = ChainDiagram::build(shape, vals, cm);
    CHECK(d.map(0, 3).at(0) == QMat::identity(1));

    // break one square: 0 -> 1 -> 3 gives 1, 0 -> 2 -> 3 gives 2
    cm[{2, 3}].at(0)(0, 0) = 2;
    CHECK_THROWS_WITH_AS(ChainDiagram::build(shape, vals, cm),
                         "chain diagram maps do not commute", InputError);
}

TEST_CASE("totalization over the empty shape is the zero complex") {
    auto empty = make_poset({}, {});
    ChainDiagram d = ChainDiagram::build(empty, {}, {});
    Totalization t = hocolim(d);
    CHECK(t.total == ChainComplex::zero());
    Cototalization c = holim(d);
    CHECK(c.total == ChainComplex::zero());
}

TEST_CASE("totalizing a punctured square shifts the bottom value by one") {
    auto shape = punctured_square();
    Rng rng = Rng::for_property(kSeed, "punctured square");
    for (int t = 0; t < 50; t++) {
        ChainComplex x = random_complex(rng, -2, 4, 3);
        Totalization tot = hocolim(ChainDiagram::concentrated(shape, 0, x));
        std::vector<size_t> got = homology_profile(tot.total);
        HomologyData hx = homology(x);
        for (int n = kChainLo; n < kChainHi; n++)
            CHECK(got[chain_idx(n + 1)] == hx.rank_at(n));
        CHECK(got[chain_idx(kChainLo)] == 0);
    }

    // the sphere case written out: one generator in degree 1, none below
    Totalization tot = hocolim(ChainDiagram::concentrated(shape, 0, ChainComplex::sphere(0)));
    CHECK(tot.total.dim(0) == 1);
    CHECK(tot.total.dim(1) == 2);
    CHECK(homology(tot.total).rank_at(1) == 1);
    CHECK(homology(tot.total).rank_at(0) == 0);
}

TEST_CASE("shapes with a top element collapse onto the top value") {
    Rng rng = Rng::for_property(kSeed, "top collapse");

    // linear shape, arbitrary edge maps
    auto line = make_poset({0, 1, 2, 3}, {{0, 1}, {1, 2}, {2, 3}});
    for (int t = 0; t < 10; t++) {
        std::vector<ChainComplex> vals;
        for (int i = 0; i < 4; i++) vals.push_back(random_complex(rng, -2, 3, 3));
        ChainDiagram::CoverMaps cm;
        for (auto& [lo, hi] : line->covers())
            cm[{lo, hi}] = random_chain_map(rng, vals[lo], vals[hi]);
        ChainDiagram d = ChainDiagram::build(line, vals, cm);
        Totalization tot = hocolim(d);
        std::vector<ChainMap> legs;
        for (size_t p = 0; p < 4; p++) legs.push_back(d.map(p, 3));
        ChainMap collapse = hocolim_out(tot, d, vals[3], legs);
        CHECK(is_qis(tot.total, vals[3], collapse));
        CHECK(cm_is_zero(cm_sub(compose(collapse, hocolim_leg(tot, d, 1)), d.map(1, 3))));
    }

    // full square, constant diagram
    auto square = make_poset({0, 1, 2, 3}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    for (int t = 0; t < 10; t++) {
        ChainComplex x = random_complex(rng, -2, 3, 3);
        std::vector<ChainComplex> vals{x, x, x, x};
        ChainDiagram::CoverMaps cm;
        for (auto& [lo, hi] : square->covers()) cm[{lo, hi}] = chain_map_identity(x);
        ChainDiagram d = ChainDiagram::build(square, vals, cm);
        Totalization tot = hocolim(d);
        std::vector<ChainMap> legs(4, chain_map_identity(x));
        ChainMap collapse = hocolim_out(tot, d, x, legs);
        CHECK(is_qis(tot.total, x, collapse));
    }
}

TEST_CASE("shapes with a bottom element project onto the bottom value") {
    Rng rng = Rng::for_property(kSeed, "bottom collapse");
    auto line = make_poset({0, 1, 2}, {{0, 1}, {1, 2}});
    for (int t = 0; t < 10; t++) {
        std::vector<ChainComplex> vals;
        for (int i = 0; i < 3; i++) vals.push_back(random_complex(rng, -2, 3, 3));
        ChainDiagram::CoverMaps cm;
        for (auto& [lo, hi] : line->covers())
            cm[{lo, hi}] = random_chain_map(rng, vals[lo], vals[hi]);
        ChainDiagram d = ChainDiagram::build(line, vals, cm);
        Cototalization tot = holim(d);
        std::vector<ChainMap> legs;
        for (size_t p = 0; p < 3; p++) legs.push_back(d.map(0, p));
        ChainMap unit = holim_in(tot, d, vals[0], legs);
        CHECK(is_qis(vals[0], tot.total, unit));
        CHECK(cm_is_zero(cm_sub(compose(holim_leg(tot, d, 2), unit), d.map(0, 2))));
    }
}

TEST_CASE("totalization is invariant under objectwise quasi-isomorphism") {
    Rng rng = Rng::for_property(kSeed, "qis invariance");
    auto shape = punctured_square();
    std::vector<size_t> idmap{0, 1, 2};
    for (int t = 0; t < 50; t++) {
        std::vector<ChainComplex> vals;
        for (int i = 0; i < 3; i++) vals.push_back(random_complex(rng, -2, 3, 3));
        ChainDiagram::CoverMaps cm;
        for (auto& [lo, hi] : shape->covers())
            cm[{lo, hi}] = random_chain_map(rng, vals[lo], vals[hi]);
        ChainDiagram d = ChainDiagram::build(shape, vals, cm);

        int k = static_cast<int>(rng.range(-2, 2));
        PerturbedDiagram pert = perturb_qis(d, ChainComplex::disc(k));
        Totalization tp = hocolim(pert.diagram);
        Totalization td = hocolim(d);
        ChainMap cmp = hocolim_transport(tp, pert.diagram, td, d, idmap, pert.proj);
        CHECK(is_qis(tp.total, td.total, cmp));

        // contravariant transport against the same projections compares the
        // dual totalizations the other way round
        Cototalization cp = holim(pert.diagram);
        Cototalization cd = holim(d);
        ChainMap dualcmp = holim_transport(cd, d, cp, pert.diagram, idmap, pert.proj);
        CHECK(is_qis(cp.total, cd.total, dualcmp));
    }
}

TEST_CASE("transports compose and respect identities") {
    Rng rng = Rng::for_property(kSeed, "transport composition");
    auto line2 = make_poset({0, 1}, {{0, 1}});
    auto line3 = make_poset({0, 1, 2}, {{0, 1}, {1, 2}});

    for (int t = 0; t < 10; t++) {
        std::vector<ChainComplex> vals;
        for (int i = 0; i < 3; i++) vals.push_back(random_complex(rng, -2, 3, 3));
        ChainDiagram::CoverMaps cm;
        for (auto& [lo, hi] : line3->covers())
            cm[{lo, hi}] = random_chain_map(rng, vals[lo], vals[hi]);
        ChainDiagram d3 = ChainDiagram::build(line3, vals, cm);

        // restriction of the diagram to {0, 1} transported into the whole
        ChainDiagram d2 = d3.restrict({0, 1});
        Totalization t2 = hocolim(d2);
        Totalization t3 = hocolim(d3);
        std::vector<size_t> g{0, 1};
        std::vector<ChainMap> comp{chain_map_identity(vals[0]), chain_map_identity(vals[1])};
        ChainMap incl = hocolim_transport(t2, d2, t3, d3, g, comp);

        // identity transport is the identity matrix in every degree
        std::vector<size_t> idg{0, 1, 2};
        std::vector<ChainMap> idc;
        for (int i = 0; i < 3; i++) idc.push_back(chain_map_identity(vals[i]));
        ChainMap ident = hocolim_transport(t3, d3, t3, d3, idg, idc);
        CHECK(cm_is_zero(cm_sub(ident, chain_map_identity(t3.total))));

        // composite of the two equals the direct transport
        ChainMap direct = hocolim_transport(t2, d2, t3, d3, g, comp);
        CHECK(cm_is_zero(cm_sub(compose(ident, incl), direct)));

        // collapsing transport: send everything to the top of a point shape
        auto pt = make_poset({0}, {});
        ChainDiagram dp = ChainDiagram::concentrated(pt, 0, vals[2]);
        std::vector<size_t> cg{0, 0, 0};
        std::vector<ChainMap> cc{d3.map(0, 2), d3.map(1, 2), chain_map_identity(vals[2])};
        ChainMap coll = hocolim_transport(t3, d3, hocolim(dp), dp, cg, cc);
        Totalization tp = hocolim(dp);
        CHECK(is_qis(t3.total, tp.total, coll));
    }
}

TEST_CASE("transport rejects unnatural or non-monotone data") {
    auto line2 = make_poset({0, 1}, {{0, 1}});
    ChainComplex q = ChainComplex::sphere(0);
    std::vector<ChainComplex> vals{q, q};
    ChainDiagram::CoverMaps cm;
    cm[{0, 1}] = chain_map_identity(q);
    ChainDiagram d = ChainDiagram::build(line2, vals, cm);
    Totalization t = hocolim(d);

    std::vector<ChainMap> comp{chain_map_identity(q), chain_map_identity(q)};
    ChainMap doubled = chain_map_identity(q);
    doubled.at(0)(0, 0) = 2;
    std::vector<ChainMap> bad{chain_map_identity(q), doubled};
    CHECK_THROWS_WITH_AS(hocolim_transport(t, d, t, d, {0, 1}, bad),
                         "transport components are not natural", InputError);

    auto anti = opposite(*line2);
    ChainDiagram da = ChainDiagram::build(anti, vals, {{{1, 0}, chain_map_identity(q)}});
    Totalization ta = hocolim(da);
    CHECK_THROWS_WITH_AS(hocolim_transport(t, d, ta, da, {0, 1}, comp),
                         "transport shape map is not monotone", InputError);
}

TEST_CASE("window guards reject totalizations that overflow") {
    auto line = make_poset({0, 1}, {{0, 1}});
    ChainComplex top = ChainComplex::sphere(kChainHi);
    ChainDiagram d = ChainDiagram::concentrated(line, 0, top);
    CHECK_THROWS_WITH_AS(hocolim(d), "totalization leaves the bounded degree window",
                         InputError);
    CHECK_THROWS_WITH_AS(mapping_cone(top, ChainComplex::zero(),
                                      chain_map_zero(top, ChainComplex::zero())),
                         "mapping cone leaves the bounded degree window", InputError);
}
