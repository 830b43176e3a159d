// Command-line front end: single distances, 3D-discrimination grids,
// exponential-family closed forms, and the self-check suites.
//
// Exit codes: 0 ok, 1 property failure, 2 input error, 3 domain error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bregman/bregman.hpp"

namespace {

using namespace bregman;

struct range_arg {
    double min = 0.0;
    double max = 0.0;
    int steps = 0;
};

range_arg parse_range(const std::string& text) {
    auto c1 = text.find(':');
    auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw input_error("range must be <min>:<max>:<steps>, got '" + text + "'");
    range_arg r;
    r.min = parse_double(std::string_view(text).substr(0, c1));
    r.max = parse_double(std::string_view(text).substr(c1 + 1, c2 - c1 - 1));
    double steps = parse_double(std::string_view(text).substr(c2 + 1));
    if (steps < 2 || steps != std::floor(steps))
        throw input_error("range steps must be an integer >= 2");
    r.steps = static_cast<int>(steps);
    return r;
}

int cmd_divergence(const std::string& phi, const std::string& p_file, const std::string& q_file,
                   const std::optional<std::string>& m_file, const std::string& kind) {
    generator g = [&] {
        try {
            return parse_generator(phi);
        } catch (const std::invalid_argument& e) {
            throw input_error(e.what());
        }
    }();
    discrete_measure p = load_measure_json(p_file);
    discrete_measure q = load_measure_json(q_file);
    std::optional<discrete_measure> m;
    if (m_file) m = load_measure_json(*m_file);
    const discrete_measure& scale = m ? *m : q;
    ext_real v = kind == "dphi" ? d_phi(g, p, scale) : b_phi(g, p, q, scale);
    std::cout << format_sig17(v) << "\n";
    return 0;
}

int cmd_grid3d(const std::string& family, double ptilde, double qtilde,
               const std::string& alpha_range, const std::string& beta_range,
               const std::string& out_path) {
    if (family.rfind("binomial:", 0) != 0)
        throw input_error("grid3d supports the binomial:<n> family");
    double n_raw = parse_double(std::string_view(family).substr(9));
    if (n_raw < 1.0 || n_raw != std::floor(n_raw))
        throw input_error("binomial n must be a positive integer");
    int n = static_cast<int>(n_raw);
    range_arg ar = parse_range(alpha_range);
    range_arg br = parse_range(beta_range);
    grid_spec spec{ar.min, ar.max, ar.steps, br.min, br.max, br.steps};
    spec.validate();
    discrete_measure p(binomial_pmf(n, binomial_theta(ptilde)));
    discrete_measure q(binomial_pmf(n, binomial_theta(qtilde)));
    auto values = discrimination_grid(p, q, spec);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw input_error("cannot open output file: " + out_path);
    write_grid_csv(out, spec, values);
    return 0;
}

int cmd_expfam(const std::string& family, double alpha, const std::string& th1,
               const std::string& th2, const std::optional<std::string>& th0,
               const std::string& quantity) {
    exp_family f = [&] {
        try {
            return parse_family(family);
        } catch (const std::invalid_argument& e) {
            throw input_error(e.what());
        }
    }();
    std::vector<double> t1 = parse_vector(th1);
    std::vector<double> t2 = parse_vector(th2);
    ext_real v(0.0);
    if (quantity == "dalpha") {
        v = d_alpha(f, alpha, t1, t2);
    } else {
        if (!th0) throw input_error("--theta0 is required for --quantity balpha");
        std::vector<double> t0 = parse_vector(*th0);
        v = b_alpha(f, alpha, t1, t2, t0);
    }
    std::cout << format_sig17(v) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// check suites

struct suite_report {
    bool all_pass = true;

    void line(const std::string& name, double max_dev, double bound) {
        bool ok = max_dev <= bound;
        all_pass = all_pass && ok;
        std::printf("%s  %-38s max deviation %.3e (bound %.1e)\n", ok ? "PASS" : "FAIL",
                    name.c_str(), max_dev, bound);
    }
    void claim(const std::string& name, bool ok) {
        all_pass = all_pass && ok;
        std::printf("%s  %s\n", ok ? "PASS" : "FAIL", name.c_str());
    }
};

std::vector<generator> builtin_generators() {
    std::vector<generator> gs;
    gs.push_back(make_kl());
    gs.push_back(make_reverse_kl());
    gs.push_back(make_total_variation());
    gs.push_back(make_pearson());
    gs.push_back(make_lecam());
    gs.push_back(make_power(0.5));
    gs.push_back(make_power(2.0));
    gs.push_back(make_power(-0.5));
    return gs;
}

discrete_measure random_probability(std::mt19937& rng, std::size_t d) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::vector<double> m(d);
    double tot = 0.0;
    for (auto& x : m) tot += (x = u(rng));
    for (auto& x : m) x /= tot;
    return discrete_measure::probability(std::move(m), 1e-9);
}

discrete_measure random_finite(std::mt19937& rng, std::size_t d) {
    std::uniform_real_distribution<double> u(0.05, 2.0);
    std::vector<double> m(d);
    for (auto& x : m) x = u(rng);
    return discrete_measure(std::move(m));
}

int run_identities() {
    std::mt19937 rng(20211026u);
    suite_report rep;
    auto gens = builtin_generators();

    double dev_scale = 0.0, dev_kl = 0.0, dev_tv = 0.0, dev_rkl = 0.0, dev_adj = 0.0,
           dev_lower = 0.0, dev_homog = 0.0;
    bool bounds_ok = true;
    for (int it = 0; it < 100; ++it) {
        std::size_t d = 2 + static_cast<std::size_t>(rng() % 10);
        auto p = random_probability(rng, d);
        auto q = random_probability(rng, d);
        auto m1 = random_finite(rng, d);
        auto m2 = random_finite(rng, d);

        for (const auto& g : gens) {
            double lhs = b_phi(g, p, q, q).value();
            double rhs = d_phi(g, p, q).value();
            dev_scale = std::max(dev_scale, std::abs(lhs - rhs));
            dev_adj = std::max(dev_adj,
                               std::abs(d_phi(adjoint(g), p, q).value() - d_phi(g, q, p).value()));
            ext_real dm = d_phi(g, p, m1);
            ext_real low = divergence_lower_bound(g, m1);
            dev_lower = std::max(dev_lower, std::max(0.0, low.value() - dm.value()));
            double dpq = d_phi(g, p, q).value();
            if (dpq < -1e-12) bounds_ok = false;
            ext_real upper = g.at_zero() + g.adjoint_at_zero();
            if (upper.finite() && dpq > upper.value() + 1e-12) bounds_ok = false;
        }
        dev_kl = std::max(dev_kl, std::abs(b_phi(make_kl(), p, q, m1).value() -
                                           b_phi(make_kl(), p, q, m2).value()));
        stable_sum tv_sum;
        for (std::size_t i = 0; i < d; ++i) tv_sum.add(std::abs(p[i] - q[i]));
        dev_tv = std::max(dev_tv, std::abs(b_phi(make_total_variation(), p, q, q).value() -
                                           tv_sum.get()));
        double chi2 = d_phi(make_pearson(), p, q).value();
        double kl = d_phi(make_kl(), p, q).value();
        dev_rkl = std::max(dev_rkl,
                           std::abs(b_phi(make_reverse_kl(), p, q, p).value() - (chi2 - kl)));
        // order-1 homogeneity of the scaled integrand
        double t = 0.25 + 3.0 * std::generate_canonical<double, 53>(rng);
        std::vector<double> tp(d), tq(d), tm(d);
        for (std::size_t i = 0; i < d; ++i) {
            tp[i] = t * p[i];
            tq[i] = t * q[i];
            tm[i] = t * m1[i];
        }
        double base = detail::scaled_bregman_sum(make_pearson(), p.masses(), q.masses(),
                                                 m1.masses())
                          .value();
        double scaled = detail::scaled_bregman_sum(make_pearson(), tp, tq, tm).value();
        dev_homog = std::max(dev_homog, std::abs(scaled - t * base) / (1.0 + std::abs(t * base)));
    }
    rep.line("scale identity B(P,Q|Q)=D(P,Q)", dev_scale, 1e-12);
    rep.line("KL scale independence", dev_kl, 1e-12);
    rep.line("total variation reduction", dev_tv, 1e-12);
    rep.line("reverse-KL identity chi2-KL", dev_rkl, 1e-8);
    rep.line("adjoint skew symmetry", dev_adj, 1e-12);
    rep.line("divergence lower bound", dev_lower, 1e-12);
    rep.line("integrand homogeneity", dev_homog, 1e-12);
    rep.claim("divergence range bounds", bounds_ok);

    // family-level skew symmetry
    std::uniform_real_distribution<double> ua(-1.0, 2.0), ut(0.3, 3.0);
    double dev_skew = 0.0;
    auto ray = rayleigh();
    auto bin = binomial(10);
    for (int it = 0; it < 100; ++it) {
        double a = ua(rng);
        if (std::abs(a) < 1e-3 || std::abs(a - 1.0) < 1e-3) continue;
        std::vector<double> t1{ut(rng)}, t2{ut(rng)};
        ext_real lhs = d_alpha(ray, a, t2, t1);
        ext_real rhs = d_alpha(ray, 1.0 - a, t1, t2);
        if (lhs.finite() && rhs.finite())
            dev_skew = std::max(dev_skew, std::abs(lhs.value() - rhs.value()) /
                                              (1.0 + std::abs(rhs.value())));
        std::vector<double> b1{ut(rng) - 1.5}, b2{ut(rng) - 1.5};
        dev_skew = std::max(dev_skew, std::abs(d_alpha(bin, a, b2, b1).value() -
                                               d_alpha(bin, 1.0 - a, b1, b2).value()) /
                                          (1.0 + std::abs(d_alpha(bin, a, b2, b1).value())));
    }
    rep.line("power skew symmetry", dev_skew, 1e-10);
    return rep.all_pass ? 0 : 1;
}

int run_oracle() {
    std::mt19937 rng(7u);
    suite_report rep;
    std::uniform_real_distribution<double> uth(0.5, 3.0), ua(0.15, 0.85), ub(-1.0, 1.0);

    double dev_bin = 0.0;
    auto fam = binomial(10);
    for (int it = 0; it < 20; ++it) {
        double a = ua(rng) * 3.0 - 1.0;
        if (std::abs(a) < 1e-3 || std::abs(a - 1.0) < 1e-3) continue;
        std::vector<double> t1{ub(rng)}, t2{ub(rng)}, t0{ub(rng)};
        discrete_measure p(binomial_pmf(10, t1[0])), q(binomial_pmf(10, t2[0])),
            m(binomial_pmf(10, t0[0]));
        double closed = b_alpha(fam, a, t1, t2, t0).value();
        double exact = b_phi(make_power(a), p, q, m).value();
        dev_bin = std::max(dev_bin, std::abs(closed - exact) / (1.0 + std::abs(exact)));
    }
    rep.line("binomial closed form vs exact sum", dev_bin, 1e-10);

    double dev_ray = 0.0;
    auto ray = rayleigh();
    integration_options opts;
    for (int it = 0; it < 5; ++it) {
        double a = ua(rng);
        std::vector<double> t1{uth(rng)}, t2{uth(rng)}, t0{uth(rng)};
        double closed = b_alpha(ray, a, t1, t2, t0).value();
        double quad = oracle_b_phi(make_power(a), rayleigh_natural_density(t1[0]),
                                   rayleigh_natural_density(t2[0]),
                                   rayleigh_natural_density(t0[0]),
                                   {-std::numeric_limits<double>::infinity(), 0.0}, opts)
                          .value();
        dev_ray = std::max(dev_ray, std::abs(closed - quad) / (1.0 + std::abs(quad)));
    }
    rep.line("rayleigh closed form vs quadrature", dev_ray, 1e-6);

    double dev_wiener = 0.0;
    auto wie = wiener(1.0);
    for (int it = 0; it < 5; ++it) {
        double a = ua(rng);
        std::vector<double> t1{uth(rng)}, t2{uth(rng)};
        double closed = d_alpha(wie, a, t1, t2).value();
        double quad = oracle_d_phi(make_power(a), wiener_marginal_density(t1[0]),
                                   wiener_marginal_density(t2[0]),
                                   {-std::numeric_limits<double>::infinity(),
                                    std::numeric_limits<double>::infinity()},
                                   opts)
                          .value();
        dev_wiener = std::max(dev_wiener, std::abs(closed - quad) / (1.0 + std::abs(quad)));
    }
    rep.line("wiener closed form vs quadrature", dev_wiener, 1e-6);

    double dev_gbm = 0.0;
    const double t = 1.5, sigma = 0.6;
    auto g2 = gbm(t, sigma);
    for (int it = 0; it < 5; ++it) {
        double a = ua(rng);
        double th1 = ub(rng), th2 = ub(rng);
        auto n1 = gbm_natural(t, sigma, th1), n2 = gbm_natural(t, sigma, th2);
        double rho = rho_alpha(g2, a, n1, n2).value();
        auto p1 = gbm_marginal_density(t, sigma, th1);
        auto p2 = gbm_marginal_density(t, sigma, th2);
        double span = 15.0 * sigma * std::sqrt(t) + 3.0 * std::abs(th1 - th2) * t;
        double mid = 0.5 * (th1 + th2) * t;
        double quad = std::log(integrate(
            [&](double x) { return std::pow(p1(x), a) * std::pow(p2(x), 1.0 - a); },
            mid - span, mid + span, opts));
        dev_gbm = std::max(dev_gbm, std::abs(rho - quad) / (1.0 + std::abs(quad)));
    }
    rep.line("gbm rho_alpha vs quadrature", dev_gbm, 1e-6);
    return rep.all_pass ? 0 : 1;
}

int run_sufficiency() {
    std::mt19937 rng(41u);
    suite_report rep;
    std::uniform_real_distribution<double> u(0.2, 2.0);
    double dev = 0.0;
    bool flags_ok = true;
    for (int it = 0; it < 20; ++it) {
        // three classes of sizes 2..4 with per-class proportional densities
        std::vector<std::size_t> assign;
        for (std::size_t cls = 0; cls < 3; ++cls) {
            std::size_t reps = 2 + rng() % 3;
            for (std::size_t r = 0; r < reps; ++r) assign.push_back(cls);
        }
        std::size_t d = assign.size();
        std::vector<double> h(d), gp{u(rng), u(rng), u(rng)}, gq{u(rng), u(rng), u(rng)},
            gm{u(rng), u(rng), u(rng)};
        for (auto& x : h) x = u(rng);
        std::vector<double> pv(d), qv(d), mv(d);
        double pt = 0.0, qt = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            pv[i] = gp[assign[i]] * h[i];
            qv[i] = gq[assign[i]] * h[i];
            mv[i] = gm[assign[i]] * h[i];
            pt += pv[i];
            qt += qv[i];
        }
        for (std::size_t i = 0; i < d; ++i) {
            pv[i] /= pt;
            qv[i] /= qt;
        }
        discrete_measure p(pv), q(qv), m(mv);
        merge_map t(assign);
        flags_ok = flags_ok && is_sufficient(t, p, q, m);
        auto tp = merge(t, p), tq = merge(t, q), tm = merge(t, m);
        for (const auto& g : builtin_generators()) {
            double before = b_phi(g, p, q, m).value();
            double after = b_phi(g, tp, tq, tm).value();
            dev = std::max(dev, std::abs(before - after) / (1.0 + std::abs(before)));
        }
    }
    rep.claim("constructed triples are sufficient", flags_ok);
    rep.line("sufficient-merge distance preservation", dev, 1e-10);
    return rep.all_pass ? 0 : 1;
}

int run_counterexample() {
    suite_report rep;
    discrete_measure p({0.5, 0.25, 0.25}), q({1.0, 0.0, 0.0});
    discrete_measure ones3({1.0, 1.0, 1.0}), ones2({1.0, 1.0});
    merge_map t({0, 1, 1});
    double unmerged = b_phi(make_pearson(), p, q, ones3).value();
    double merged = b_phi(make_pearson(), merge(t, p), merge(t, q), ones2).value();
    std::printf("unmerged Euclidean Bregman distance: %s\n", format_shortest(unmerged).c_str());
    std::printf("merged   Euclidean Bregman distance: %s\n", format_shortest(merged).c_str());
    rep.claim("unmerged = 0.375", std::abs(unmerged - 0.375) < 1e-15);
    rep.claim("merged = 0.5", std::abs(merged - 0.5) < 1e-15);
    rep.claim("merging increased the distance", merged > unmerged);
    return rep.all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scaled Bregman distances and phi-divergences"};
    app.require_subcommand(1);

    std::string phi, p_file, q_file, kind = "bphi";
    std::optional<std::string> m_file;
    auto* div = app.add_subcommand("divergence", "Compute one distance between measure files");
    div->add_option("--phi", phi, "Generator: kl|rkl|tv|pearson|lecam|power:<alpha>")->required();
    div->add_option("--p", p_file, "JSON measure file for P")->required();
    div->add_option("--q", q_file, "JSON measure file for Q")->required();
    div->add_option("--m", m_file, "JSON scale measure file (default: Q)");
    div->add_option("--kind", kind, "dphi computes D(P, M); bphi computes B(P, Q | M)")
        ->check(CLI::IsMember({"dphi", "bphi"}))
        ->required();

    std::string g_family, g_alpha = "0.2:2:50", g_beta = "0:1:50", g_out;
    double ptilde = 0.0, qtilde = 0.0;
    auto* grid = app.add_subcommand(
        "grid3d", "Write the alpha/beta discrimination grid for a binomial pair as CSV");
    grid->add_option("--family", g_family, "binomial:<n>")->required();
    grid->add_option("--ptilde", ptilde, "success probability of P")->required();
    grid->add_option("--qtilde", qtilde, "success probability of Q")->required();
    grid->add_option("--alpha", g_alpha,
                     "<min>:<max>:<steps>, default 0.2:2:50; exact 0/1 use the log limits");
    grid->add_option("--beta", g_beta, "<min>:<max>:<steps> within [0,1], default 0:1:50");
    grid->add_option("--out", g_out, "output CSV path")->required();

    std::string e_family, e_th1, e_th2, quantity = "balpha";
    std::optional<std::string> e_th0;
    double e_alpha = 0.0;
    auto* ef = app.add_subcommand("expfam", "Closed-form distances in an exponential family");
    ef->add_option("--family", e_family,
                   "binomial:<n>|rayleigh|poisson-process:<t>|wiener:<t>|gbm:<t>,<sigma>")
        ->required();
    ef->add_option("--alpha", e_alpha, "power index (0/1 route to the limit formulas)")
        ->required();
    ef->add_option("--theta1", e_th1, "natural parameter vector, comma-separated")->required();
    ef->add_option("--theta2", e_th2, "natural parameter vector, comma-separated")->required();
    ef->add_option("--theta0", e_th0, "scale parameter vector (balpha only)");
    ef->add_option("--quantity", quantity, "dalpha|balpha")
        ->check(CLI::IsMember({"dalpha", "balpha"}));

    std::string suite;
    auto* check = app.add_subcommand("check", "Run a verification suite");
    check->add_option("--suite", suite, "identities|oracle|sufficiency|counterexample")
        ->check(CLI::IsMember({"identities", "oracle", "sufficiency", "counterexample"}))
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (div->parsed()) return cmd_divergence(phi, p_file, q_file, m_file, kind);
        if (grid->parsed()) return cmd_grid3d(g_family, ptilde, qtilde, g_alpha, g_beta, g_out);
        if (ef->parsed()) return cmd_expfam(e_family, e_alpha, e_th1, e_th2, e_th0, quantity);
        if (suite == "identities") return run_identities();
        if (suite == "oracle") return run_oracle();
        if (suite == "sufficiency") return run_sufficiency();
        return run_counterexample();
    } catch (const input_error& e) {
        std::cerr << "input-error " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input-error " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "domain-error " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error " << e.what() << "\n";
        return 3;
    }
}
