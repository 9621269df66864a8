#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "synthrisk/csv.hpp"
#include "synthrisk/datasets.hpp"
#include "synthrisk/distance.hpp"
#include "synthrisk/lof.hpp"
#include "synthrisk/neighbors.hpp"
#include "synthrisk/rng.hpp"

using namespace synthrisk;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    const auto path = (std::filesystem::temp_directory_path() / name).string();
    std::ofstream out(path);
    out << content;
    return path;
}

Dataset numeric_1d(std::vector<double> values) {
    Schema schema({{"x", AttrKind::Numeric, {}, {}, {}}});
    return Dataset(schema, std::move(values));
}

}  // namespace

TEST_CASE("load_csv infers kinds from the cells") {
    const auto path = write_temp("core_infer.csv",
                                 "age,sex,wage\n31,M,50000\n42,F,61000\n23,M,32000\n");
    const auto data = load_csv(path);
    CHECK(data.schema().at(0).kind == AttrKind::Numeric);
    CHECK(data.schema().at(1).kind == AttrKind::Categorical);
    CHECK(data.schema().at(2).kind == AttrKind::Numeric);
    CHECK(data.n_rows() == 3);
    CHECK(data.at(0, 0) == 31.0);
    CHECK(data.schema().at(1).vocabulary == std::vector<std::string>{"M", "F"});
}

TEST_CASE("load_csv rejects degenerate inputs") {
    CHECK_THROWS(load_csv("/nonexistent/definitely_missing.csv"));
    const auto empty = write_temp("core_empty.csv", "a,b\n");
    CHECK_THROWS_WITH_AS(load_csv(empty), doctest::Contains("empty table"), std::runtime_error);
    const auto ragged = write_temp("core_ragged.csv", "a,b\n1,2\n3\n");
    CHECK_THROWS_WITH_AS(load_csv(ragged), doctest::Contains("ragged"), std::runtime_error);
    const auto blank = write_temp("core_blank.csv", "a,b\n1,\n");
    CHECK_THROWS(load_csv(blank));
}

TEST_CASE("load_csv honors schema hints") {
    const auto path = write_temp("core_hint.csv", "a,b\n1,x\n2,y\n");
    Schema hints({{"a", AttrKind::Numeric, {}, {}, {}},
                  {"b", AttrKind::Categorical, {}, {}, {}}});
    const auto data = load_csv(path, hints);
    CHECK(data.schema().at(0).kind == AttrKind::Numeric);

    Schema bad_names({{"wrong", AttrKind::Numeric, {}, {}, {}},
                      {"b", AttrKind::Categorical, {}, {}, {}}});
    CHECK_THROWS(load_csv(path, bad_names));

    const auto text = write_temp("core_hint_bad.csv", "a,b\n1,x\nnope,y\n");
    CHECK_THROWS(load_csv(text, hints));
}

TEST_CASE("load_csv handles an adult-style attribute mix") {
    // 15 attributes, 9 categorical and 6 numeric.
    std::string header, row1, row2;
    for (int i = 0; i < 6; ++i) {
        header += "num" + std::to_string(i) + ",";
        row1 += std::to_string(i) + ".5,";
        row2 += std::to_string(i + 7) + ".25,";
    }
    for (int i = 0; i < 9; ++i) {
        header += "cat" + std::to_string(i) + (i + 1 < 9 ? "," : "\n");
        row1 += "a" + std::to_string(i) + (i + 1 < 9 ? "," : "\n");
        row2 += "b" + std::to_string(i) + (i + 1 < 9 ? "," : "\n");
    }
    const auto path = write_temp("core_adult.csv", header + row1 + row2);
    const auto data = load_csv(path);
    std::size_t numeric = 0, categorical = 0;
    for (const auto& a : data.schema().attributes())
        (a.kind == AttrKind::Numeric ? numeric : categorical) += 1;
    CHECK(numeric == 6);
    CHECK(categorical == 9);
}

TEST_CASE("csv round-trips through save and load") {
    const auto data = make_mini_adult(40, 3);
    const auto path = (std::filesystem::temp_directory_path() / "core_roundtrip.csv").string();
    save_csv(data, path);
    const auto back = load_csv(path);
    REQUIRE(back.n_rows() == data.n_rows());
    for (std::size_t r = 0; r < data.n_rows(); ++r)
        for (std::size_t a = 0; a < data.n_attrs(); ++a) {
            if (data.schema().at(a).kind == AttrKind::Numeric) {
                CHECK(back.at(r, a) == doctest::Approx(data.at(r, a)).epsilon(1e-12));
            } else {
                const auto& va = data.schema().at(a).vocabulary;
                const auto& vb = back.schema().at(a).vocabulary;
                CHECK(va[static_cast<std::size_t>(data.at(r, a))] ==
                      vb[static_cast<std::size_t>(back.at(r, a))]);
            }
        }
}

TEST_CASE("split produces disjoint floor-sized parts deterministically") {
    const auto data = make_mini_adult(100, 5);
    auto [tr, co, re] = split(data, 0.4, 0.3, 0.3, 7);
    CHECK(tr.n_rows() == 40);
    CHECK(co.n_rows() == 30);
    CHECK(re.n_rows() == 30);

    auto [tr2, co2, re2] = split(data, 0.4, 0.3, 0.3, 7);
    for (std::size_t r = 0; r < tr.n_rows(); ++r) CHECK(tr.rows_equal(r, tr2, r));
    for (std::size_t r = 0; r < re.n_rows(); ++r) CHECK(re.rows_equal(r, re2, r));

    // Disjointness via exact row matching (rows of mini-adult are unique).
    for (std::size_t i = 0; i < tr.n_rows(); ++i)
        for (std::size_t j = 0; j < co.n_rows(); ++j) CHECK_FALSE(tr.rows_equal(i, co, j));

    SUBCASE("n=10 with (0.5, 0.25, 0.25) drops one row") {
        const auto small = make_mini_adult(10, 5);
        auto [a, b, c] = split(small, 0.5, 0.25, 0.25, 1);
        CHECK(a.n_rows() == 5);
        CHECK(b.n_rows() == 2);
        CHECK(c.n_rows() == 2);
    }
    SUBCASE("invalid fractions throw") {
        CHECK_THROWS(split(data, 0.0, 0.5, 0.5, 1));
        CHECK_THROWS(split(data, 0.6, 0.3, 0.3, 1));
    }
}

TEST_CASE("embed scales numerics and one-hot encodes categoricals") {
    Schema schema({{"x", AttrKind::Numeric, {}, {}, {}},
                   {"c", AttrKind::Categorical, {}, {}, {"u", "v"}}});
    Dataset data(schema, {0.0, 0, 5.0, 0, 10.0, 1});
    const auto emb = embed(data);
    REQUIRE(emb.dims == 3);
    CHECK(emb.row(0)[0] == 0.0);
    CHECK(emb.row(1)[0] == 0.5);
    CHECK(emb.row(2)[0] == 1.0);

    SUBCASE("one categorical mismatch contributes squared distance exactly 1") {
        Dataset pair(schema, {3.0, 0, 3.0, 1});
        const auto e = embed(pair, ScalingParams::fit(data));
        double sq = 0.0;
        for (std::size_t d = 0; d < e.dims; ++d) {
            const double diff = e.row(0)[d] - e.row(1)[d];
            sq += diff * diff;
        }
        CHECK(sq == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("identical records embed at distance zero") {
        Dataset pair(schema, {3.0, 1, 3.0, 1});
        const auto e = embed(pair, ScalingParams::fit(data));
        CHECK(oracles::euclidean(e.row(0), e.row(1), e.dims) == 0.0);
    }
    SUBCASE("out-of-range values clamp under supplied params") {
        Dataset wide(schema, {-5.0, 0, 20.0, 1});
        const auto e = embed(wide, ScalingParams::fit(data));
        CHECK(e.row(0)[0] == 0.0);
        CHECK(e.row(1)[0] == 1.0);
    }
    SUBCASE("constant numeric column maps to zeros") {
        Schema s1({{"x", AttrKind::Numeric, {}, {}, {}}});
        Dataset flat(s1, {4.0, 4.0, 4.0});
        const auto e = embed(flat);
        for (std::size_t r = 0; r < 3; ++r) CHECK(e.row(r)[0] == 0.0);
    }
    SUBCASE("unknown category is an error") {
        CHECK_THROWS(Dataset(schema, {1.0, 2}));  // index 2 outside {u, v}
    }
    SUBCASE("scaling params serialize to json and back") {
        const auto p = ScalingParams::fit(data);
        const auto q = ScalingParams::from_json(p.to_json());
        CHECK(q.mins == p.mins);
        CHECK(q.maxs == p.maxs);
    }
}

TEST_CASE("gower distance matches the definition") {
    Schema schema({{"x", AttrKind::Numeric, {}, {}, {}},
                   {"c", AttrKind::Categorical, {}, {}, {"u", "v"}}});
    Dataset data(schema, {0.0, 0, 10.0, 1, 5.0, 0});
    const auto ranges = GowerRanges::fit(data);

    CHECK(gower_distance(data.row(0), data.row(0), schema, ranges) == 0.0);
    CHECK(gower_distance(data.row(0), data.row(1), schema, ranges) == 1.0);
    // numeric range 10 differing by 5, categorical equal -> (0.5 + 0)/2
    CHECK(gower_distance(data.row(0), data.row(2), schema, ranges) ==
          doctest::Approx(0.25).epsilon(1e-15));

    SUBCASE("symmetric, bounded, zero iff equal (randomized)") {
        const auto table = make_mini_adult(60, 11);
        const auto r = GowerRanges::fit(table);
        std::vector<std::size_t> attrs(table.n_attrs());
        for (std::size_t i = 0; i < attrs.size(); ++i) attrs[i] = i;
        std::mt19937_64 rng(99);
        std::uniform_int_distribution<std::size_t> pick(0, table.n_rows() - 1);
        for (int t = 0; t < 200; ++t) {
            const auto i = pick(rng), j = pick(rng);
            const double dij = gower_distance(table.row(i), table.row(j), table.schema(), r);
            const double dji = gower_distance(table.row(j), table.row(i), table.schema(), r);
            CHECK(dij == dji);
            CHECK(dij >= 0.0);
            CHECK(dij <= 1.0);
            const double oracle = oracles::brute_gower(table.row(i), table.row(j), table.schema(),
                                                       r.min, r.range, attrs);
            CHECK(dij == oracle);
            if (i == j) CHECK(dij == 0.0);
        }
    }
}

TEST_CASE("nearest_neighbors is exact with the documented tie-break") {
    SUBCASE("hand-checked 1-d case") {
        const auto ref = embed(numeric_1d({0.0, 1.0, 2.0}));
        const auto query = embed(numeric_1d({0.9, 1.8}), ref.params);
        // scaling maps to [0, 0.5, 1.0]; query 0.9 -> 0.45, neighbors 0.5 then 0.0
        const auto nn = nearest_neighbors(query, ref, 2);
        CHECK(nn.index(0, 0) == 1);
        CHECK(nn.index(0, 1) == 0);
        CHECK(nn.distance(0, 0) == doctest::Approx(0.05));
        CHECK(nn.distance(0, 1) == doctest::Approx(0.45));
    }
    SUBCASE("self-query returns zero distance") {
        const auto pts = embed(make_mini_adult(30, 2));
        const auto nn = nearest_neighbors(pts, pts, 1, /*exclude_self=*/false);
        for (std::size_t q = 0; q < pts.rows; ++q) CHECK(nn.distance(q, 0) == 0.0);
    }
    SUBCASE("k equal to the reference size touches every index") {
        const auto pts = embed(make_mini_adult(12, 2));
        const auto nn = nearest_neighbors(pts, pts, 12);
        for (std::size_t q = 0; q < pts.rows; ++q) {
            std::set<std::size_t> seen;
            for (std::size_t j = 0; j < 12; ++j) seen.insert(nn.index(q, j));
            CHECK(seen.size() == 12);
        }
    }
    SUBCASE("ties break toward the lower reference index") {
        const auto ref = embed(numeric_1d({5.0, 3.0, 7.0, 5.0}));  // rows 0 and 3 identical
        const auto query = embed(numeric_1d({5.0}), ref.params);
        const auto nn = nearest_neighbors(query, ref, 2);
        CHECK(nn.index(0, 0) == 0);
        CHECK(nn.index(0, 1) == 3);
    }
    SUBCASE("k out of range throws") {
        const auto pts = embed(numeric_1d({1.0, 2.0}));
        CHECK_THROWS(nearest_neighbors(pts, pts, 3));
        CHECK_THROWS(nearest_neighbors(pts, pts, 2, /*exclude_self=*/true));
    }
    SUBCASE("parallel kernel is bit-identical to the serial reference and the oracle") {
        const auto a = embed(make_mini_adult(80, 21));
        const auto b = embed(make_mini_adult(50, 22), a.params);
        const auto par = nearest_neighbors(b, a, 5);
        const auto ser = nearest_neighbors_serial(b, a, 5);
        CHECK(par.indices == ser.indices);
        CHECK(par.distances == ser.distances);
        const auto oracle = oracles::brute_nn(b, a, 5, false);
        for (std::size_t q = 0; q < b.rows; ++q)
            for (std::size_t j = 0; j < 5; ++j) {
                CHECK(par.index(q, j) == oracle.rows[q][j].second);
                CHECK(par.distance(q, j) == oracle.rows[q][j].first);
            }
    }
}

TEST_CASE("gower_neighbors agrees with its serial reference") {
    const auto synth = make_mini_adult(60, 31);
    const auto query = make_mini_adult(25, 32);
    const auto ranges = GowerRanges::fit(synth);
    std::vector<std::size_t> attrs = {0, 2, 5};
    const auto par = gower_neighbors(query, synth, ranges, attrs, 3);
    const auto ser = gower_neighbors_serial(query, synth, ranges, attrs, 3);
    CHECK(par.indices == ser.indices);
    CHECK(par.distances == ser.distances);
}

TEST_CASE("lof flags the isolated point and matches the brute-force oracle") {
    SUBCASE("fraction zero is the identity") {
        const auto data = make_mini_adult(25, 4);
        auto [kept, removed] = remove_outliers_lof(data, 0.0, 5);
        CHECK(kept.n_rows() == data.n_rows());
        CHECK(removed.n_rows() == 0);
        for (std::size_t r = 0; r < data.n_rows(); ++r) CHECK(kept.rows_equal(r, data, r));
    }
    SUBCASE("a far point among a tight cluster is removed first") {
        std::vector<double> xs;
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> u(0.0, 0.05);
        for (int i = 0; i < 20; ++i) xs.push_back(u(rng));
        xs.push_back(5.0);
        const auto data = numeric_1d(xs);
        auto [kept, removed] = remove_outliers_lof(data, 1.0 / 21.0, 4);
        REQUIRE(removed.n_rows() == 1);
        CHECK(removed.at(0, 0) == 5.0);
    }
    SUBCASE("fraction 0.10 on n=100 removes exactly 10 rows") {
        const auto data = make_mini_adult(100, 6);
        auto [kept, removed] = remove_outliers_lof(data, 0.10, 20);
        CHECK(removed.n_rows() == 10);
        CHECK(kept.n_rows() == 90);
    }
    SUBCASE("scores match the brute-force oracle bit-exactly") {
        const auto data = make_mini_adult(45, 7);
        const auto emb = embed(data);
        const auto fast = lof_scores(emb, 6);
        const auto slow = oracles::brute_lof(emb, 6);
        REQUIRE(fast.size() == slow.size());
        for (std::size_t i = 0; i < fast.size(); ++i) CHECK(fast[i] == slow[i]);
    }
    SUBCASE("k out of range throws") {
        const auto data = make_mini_adult(10, 7);
        CHECK_THROWS(remove_outliers_lof(data, 0.2, 10));
        CHECK_THROWS(remove_outliers_lof(data, 0.7, 3));
    }
}

TEST_CASE("external synth loader extends vocabularies with a warning") {
    const auto base = make_mini_adult(30, 9);
    const auto path = (std::filesystem::temp_directory_path() / "core_external.csv").string();
    save_csv(base, path);

    SUBCASE("round-trip against the same schema") {
        const auto loaded = load_external_synth(path, base.schema());
        REQUIRE(loaded.n_rows() == base.n_rows());
        for (std::size_t r = 0; r < base.n_rows(); ++r) CHECK(loaded.rows_equal(r, base, r));
    }
    SUBCASE("a new category level is appended") {
        std::ofstream out(path, std::ios::app);
        out << "44,Private,PhD-extra,Married,Male,40,0,<=50K\n";
        out.close();
        const auto loaded = load_external_synth(path, base.schema());
        CHECK(loaded.schema().at(2).vocabulary.size() ==
              base.schema().at(2).vocabulary.size() + 1);
        CHECK(loaded.n_rows() == base.n_rows() + 1);
    }
    SUBCASE("extra column is an error") {
        const auto bad = write_temp("core_external_bad.csv", "a,b,c\n1,2,3\n");
        CHECK_THROWS(load_external_synth(bad, base.schema()));
    }
}
