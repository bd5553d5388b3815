#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "core/io.hpp"
#include "core/rng.hpp"

using namespace latcart;

TEST_SUITE_BEGIN("io");

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("latcart_io_" + name)).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void spit(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

} // namespace

TEST_CASE("measure field roundtrip is bit-identical") {
    MeasureField m;
    m.spec = make_grid(-1.25, 2.5, 0.1, 0.9, 3, 3);
    CounterRng rng(1);
    m.values.resize(9);
    for (double& v : m.values) v = (rng.next_double() - 0.5) * 1e6;
    m.values[0] = -0.0;
    m.values[1] = 1e-300;
    std::string p = temp_path("m.lcf");
    save_field(p, m);
    MeasureField back = load_measure(p);
    CHECK(back.spec == m.spec);
    REQUIRE(back.values.size() == m.values.size());
    for (std::size_t i = 0; i < m.values.size(); ++i)
        CHECK(std::memcmp(&back.values[i], &m.values[i], 8) == 0);
    std::remove(p.c_str());
}

TEST_CASE("meaning and transform roundtrips preserve metadata") {
    MeaningField f;
    f.spec = make_grid(0, 1, 0, 1, 2, 3);
    f.dh = 2;
    f.distribution = true;
    f.values = {1, 0, 0.5, 0.5, 0, 1, 0.25, 0.75, 0.7, 0.3, 0.1, 0.9};
    std::string p = temp_path("h.lcf");
    save_field(p, f);
    MeaningField g = load_meaning(p);
    CHECK(g.dh == 2);
    CHECK(g.distribution);
    CHECK(g.values == f.values);
    CHECK(probe_field(p) == FieldKind::meaning);

    TransformField t;
    t.spec = make_grid(0, 1, 0, 1, 2, 2);
    t.positions = {0.25, 0.25, 0.25, 0.75, 0.75, 0.25, 0.75, 0.75};
    std::string q = temp_path("t.lcf");
    save_field(q, t);
    TransformField u = load_transform(q);
    CHECK(u.positions == t.positions);
    CHECK(probe_field(q) == FieldKind::transform);
    std::remove(p.c_str());
    std::remove(q.c_str());
}

TEST_CASE("bad magic reports offset 0") {
    std::string p = temp_path("bad_magic.lcf");
    spit(p, "XXXXsomething");
    try {
        load_measure(p);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.offset == 0);
    }
    std::remove(p.c_str());
}

TEST_CASE("payload size mismatch names the expected count") {
    MeasureField m;
    m.spec = make_grid(0, 1, 0, 1, 2, 2);
    m.values = {1, 2, 3, 4};
    std::string p = temp_path("short.lcf");
    save_field(p, m);
    std::string bytes = slurp(p);
    spit(p, bytes + std::string(8, '\0')); // 5 doubles for a [2,2] shape
    try {
        load_measure(p);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(std::string(e.what()).find("expected 4") != std::string::npos);
    }
    spit(p, bytes.substr(0, bytes.size() - 8));
    CHECK_THROWS_AS(load_measure(p), FormatError);
    std::remove(p.c_str());
}

TEST_CASE("kind and shape mismatches are format errors") {
    MeasureField m;
    m.spec = make_grid(0, 1, 0, 1, 2, 2);
    m.values = {1, 2, 3, 4};
    std::string p = temp_path("kind.lcf");
    save_field(p, m);
    CHECK_THROWS_AS(load_meaning(p), FormatError);
    CHECK_THROWS_AS(load_transform(p), FormatError);
    std::remove(p.c_str());
}

TEST_CASE("non-finite values are rejected at save time") {
    MeasureField m;
    m.spec = make_grid(0, 1, 0, 1, 2, 2);
    m.values = {1, 2, std::nan(""), 4};
    CHECK_THROWS_AS(validate_measure(m, false), InputError);
    std::string p = temp_path("nan.lcf");
    CHECK_THROWS_AS(save_field(p, m), InputError);
}

TEST_CASE("embeddings roundtrip exactly, with and without labels") {
    EmbeddingSet e;
    CounterRng rng(2);
    for (int i = 0; i < 25; ++i) {
        e.xy.push_back((rng.next_double() - 0.5) * 1e3);
        e.xy.push_back(rng.next_double() * 1e-7);
        e.labels.push_back("class " + std::to_string(i % 3));
    }
    e.xy[0] = -0.0;
    std::string p = temp_path("e.csv");
    save_embeddings(p, e);
    EmbeddingSet back = load_embeddings(p);
    REQUIRE(back.size() == e.size());
    for (std::size_t i = 0; i < e.xy.size(); ++i)
        CHECK(std::memcmp(&back.xy[i], &e.xy[i], 8) == 0);
    CHECK(back.labels == e.labels);

    EmbeddingSet plain{e.xy, {}};
    save_embeddings(p, plain);
    EmbeddingSet back2 = load_embeddings(p);
    CHECK_FALSE(back2.labeled());
    CHECK(back2.xy == plain.xy);
    std::remove(p.c_str());
}

TEST_CASE("header-only embeddings file is an input error") {
    std::string p = temp_path("empty.csv");
    spit(p, "z1,z2\n");
    CHECK_THROWS_AS(load_embeddings(p), InputError);
    std::remove(p.c_str());
}

TEST_CASE("mixed-arity rows name the offending line") {
    std::string p = temp_path("mixed.csv");
    spit(p, "z1,z2\n1.0,2.0\n1.0,2.0,oops\n3.0,4.0\n");
    try {
        load_embeddings(p);
        FAIL("expected FormatError");
    } catch (const FormatError& e) {
        CHECK(e.offset == 3);
    }
    spit(p, "z1,z2,label\n1.0,2.0,a\n1.0,2.0\n");
    CHECK_THROWS_AS(load_embeddings(p), FormatError);
    spit(p, "z1,z2\n1.0,not_a_number\n");
    CHECK_THROWS_AS(load_embeddings(p), FormatError);
    std::remove(p.c_str());
}

TEST_CASE("labels with commas are rejected at save") {
    EmbeddingSet e{{0, 0}, {"a,b"}};
    CHECK_THROWS_AS(save_embeddings(temp_path("badlab.csv"), e), InputError);
}

TEST_CASE("format_double round-trips") {
    CounterRng rng(77);
    for (int t = 0; t < 1000; ++t) {
        double v = (rng.next_double() - 0.5) * std::pow(10.0, rng.next_double() * 60 - 30);
        std::string s = format_double(v);
        double back = std::strtod(s.c_str(), nullptr);
        CHECK(back == v);
    }
}

TEST_SUITE_END();
