#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <sstream>

#include "bregman/families.hpp"
#include "bregman/grid.hpp"
#include "bregman/io.hpp"

using namespace bregman;
using Catch::Approx;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << body;
    return path;
}

} // namespace

TEST_CASE("measure files load and validate") {
    auto ok = write_temp("m_ok.json", R"({"support": ["a", "b"], "mass": [0.25, 0.75]})");
    auto m = load_measure_json(ok);
    CHECK(m.size() == 2);
    CHECK(m[1] == 0.75);
    CHECK(m.is_probability());

    auto no_support = write_temp("m_ns.json", R"({"mass": [1, 2, 3]})");
    CHECK(load_measure_json(no_support).total() == 6.0);

    CHECK_THROWS_AS(load_measure_json(write_temp("m_bad1.json", "not json")), input_error);
    CHECK_THROWS_AS(load_measure_json(write_temp("m_bad2.json", R"({"weights": [1]})")),
                    input_error);
    CHECK_THROWS_AS(load_measure_json(write_temp("m_bad3.json", R"({"mass": [1, "x"]})")),
                    input_error);
    CHECK_THROWS_AS(load_measure_json(write_temp("m_bad4.json", R"({"mass": [1, -2]})")),
                    input_error);
    CHECK_THROWS_AS(
        load_measure_json(write_temp("m_bad5.json", R"({"support": [1], "mass": [1, 2]})")),
        input_error);
    CHECK_THROWS_AS(load_measure_json("/nonexistent/measure.json"), input_error);
}

TEST_CASE("shortest formatting round-trips doubles bit for bit") {
    std::mt19937_64 rng(2026u);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 5000; ++i) {
        double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 41) - 20);
        double back = parse_double(format_shortest(x));
        REQUIRE(back == x);
    }
    CHECK(format_shortest(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_shortest(0.1) == "0.1");
    CHECK(parse_double("inf") == std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(parse_double("1.2.3"), input_error);
    CHECK_THROWS_AS(parse_double(""), input_error);
}

TEST_CASE("seventeen significant digits reproduce the value") {
    for (double x : {0.1, 1.0 / 3.0, 0.14384103622589046, 1e-7, 12345.678901234567}) {
        double back = 0.0;
        std::sscanf(format_sig17(x).c_str(), "%lf", &back);
        CHECK(back == x);
    }
    CHECK(format_sig17(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("vector parsing") {
    auto v = parse_vector("1.5,-2,0.25");
    REQUIRE(v.size() == 3);
    CHECK(v[1] == -2.0);
    CHECK(parse_vector("3").size() == 1);
    CHECK_THROWS_AS(parse_vector("1,,2"), input_error);
    CHECK_THROWS_AS(parse_vector("1;2"), input_error);
}

TEST_CASE("grid spec validation and evaluation") {
    grid_spec bad{0.5, 0.2, 10, 0.0, 1.0, 10};
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    grid_spec bad2{0.2, 2.0, 1, 0.0, 1.0, 10};
    CHECK_THROWS_AS(bad2.validate(), std::domain_error);
    grid_spec bad3{0.2, 2.0, 10, -0.5, 1.0, 10};
    CHECK_THROWS_AS(bad3.validate(), std::domain_error);

    discrete_measure p({0.3, 0.7}), q({0.5, 0.5});
    grid_spec spec{0.0, 1.0, 3, 0.0, 1.0, 3}; // hits both logarithmic limits
    auto vals = discrimination_grid(p, q, spec);
    REQUIRE(vals.size() == 9);
    for (double v : vals) CHECK(v >= 0.0);
    // alpha = 0 row starts at B_0(P,Q|Q) = D_0(P,Q)
    CHECK(vals[0] == Approx(d_phi(make_reverse_kl(), p, q).value()).margin(1e-12));
    // alpha = 1 row is scale-independent
    CHECK(vals[6] == Approx(vals[8]).margin(1e-12));

    auto same = discrimination_grid(p, p, spec);
    for (double v : same) CHECK(v == Approx(0.0).margin(1e-15));
}

TEST_CASE("grid cells evaluate independently, so parallel sweeps match serial ones") {
    discrete_measure p(binomial_pmf(8, binomial_theta(0.35)));
    discrete_measure q(binomial_pmf(8, binomial_theta(0.45)));
    grid_spec spec{0.2, 2.0, 12, 0.0, 1.0, 9};
    auto serial = discrimination_grid(p, q, spec);
    std::vector<double> parallel(serial.size());
    std::vector<std::future<void>> jobs;
    for (int i = 0; i < spec.alpha_steps; ++i) {
        jobs.push_back(std::async(std::launch::async, [&, i] {
            for (int j = 0; j < spec.beta_steps; ++j)
                parallel[static_cast<std::size_t>(i * spec.beta_steps + j)] =
                    power_scaled_bregman(p, q, spec.alpha_at(i), spec.beta_at(j));
        }));
    }
    for (auto& j : jobs) j.get();
    REQUIRE(parallel == serial);
}

TEST_CASE("grid CSV is deterministic and parses back exactly") {
    discrete_measure p(binomial_pmf(6, binomial_theta(0.3)));
    discrete_measure q(binomial_pmf(6, binomial_theta(0.4)));
    grid_spec spec{0.2, 2.0, 7, 0.0, 1.0, 5};
    auto vals = discrimination_grid(p, q, spec);
    std::ostringstream a, b;
    write_grid_csv(a, spec, vals);
    write_grid_csv(b, spec, vals);
    CHECK(a.str() == b.str());

    std::istringstream in(a.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "alpha,beta,value");
    std::size_t k = 0;
    while (std::getline(in, line)) {
        auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
        REQUIRE(c1 != std::string::npos);
        REQUIRE(c2 != std::string::npos);
        double alpha = parse_double(std::string_view(line).substr(0, c1));
        double beta = parse_double(std::string_view(line).substr(c1 + 1, c2 - c1 - 1));
        double value = parse_double(std::string_view(line).substr(c2 + 1));
        int i = static_cast<int>(k) / spec.beta_steps;
        int j = static_cast<int>(k) % spec.beta_steps;
        REQUIRE(alpha == spec.alpha_at(i));
        REQUIRE(beta == spec.beta_at(j));
        REQUIRE(value == vals[k]);
        ++k;
    }
    CHECK(k == vals.size());
}
