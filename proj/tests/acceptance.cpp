// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "rockgen/compare.hpp"
#include "rockgen/ddpm.hpp"
#include "rockgen/gan.hpp"
#include "rockgen/generators.hpp"
#include "rockgen/metrics.hpp"
#include "rockgen/nn.hpp"
#include "rockgen/stats.hpp"
#include "support/fixtures.hpp"

using namespace rockgen;
namespace fs = std::filesystem;

namespace {

struct Harness {
    int failures = 0;

    void run(int number, const std::string& title, double time_limit_s,
             const std::function<bool(std::string&)>& body) {
        std::string detail;
        bool ok = false;
        const auto start = std::chrono::steady_clock::now();
        try {
            ok = body(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        if (time_limit_s > 0.0 && elapsed > time_limit_s) {
            ok = false;
            detail += (detail.empty() ? "" : "; ") + std::string("over time limit");
        }
        std::printf("criterion %2d [%s]: %s (%.1fs)%s%s\n", number,
                    title.c_str(), ok ? "PASS" : "FAIL", elapsed,
                    detail.empty() ? "" : " -- ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

double column_pearson(const DiscontinuitySet& set) {
    return pearson(set.column(Parameter::DipDirection), set.column(Parameter::DipAngle));
}

// ---- independent oracles, written against first principles ----

double naive_ecdf(const std::vector<double>& xs, double t) {
    std::size_t c = 0;
    for (double x : xs) {
        if (x <= t) ++c;
    }
    return static_cast<double>(c) / static_cast<double>(xs.size());
}

double brute_force_ks_d(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> grid;
    for (double x : a) {
        grid.push_back(x);
        grid.push_back(x - 1e-9);
    }
    for (double x : b) {
        grid.push_back(x);
        grid.push_back(x - 1e-9);
    }
    double d = 0.0;
    for (double t : grid) d = std::max(d, std::abs(naive_ecdf(a, t) - naive_ecdf(b, t)));
    return d;
}

double quadrature_w1(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t m = 2 * a.size() * b.size() * 1000;
    double total = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double u = (static_cast<double>(k) + 0.5) / static_cast<double>(m);
        const double qa = a[std::min(static_cast<std::size_t>(u * a.size()), a.size() - 1)];
        const double qb = b[std::min(static_cast<std::size_t>(u * b.size()), b.size() - 1)];
        total += std::abs(qa - qb);
    }
    return total / static_cast<double>(m);
}

double pairwise_pseudo_f(const std::vector<std::array<double, 3>>& rows,
                         const std::vector<bool>& in_group1, std::size_t n1) {
    const std::size_t n = rows.size();
    auto d2 = [&rows](std::size_t i, std::size_t j) {
        double acc = 0.0;
        for (std::size_t k = 0; k < 3; ++k) {
            const double d = rows[i][k] - rows[j][k];
            acc += d * d;
        }
        return acc;
    };
    double ss_total = 0.0, ss_w1 = 0.0, ss_w2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = d2(i, j);
            ss_total += d;
            if (in_group1[i] && in_group1[j]) ss_w1 += d;
            if (!in_group1[i] && !in_group1[j]) ss_w2 += d;
        }
    }
    ss_total /= static_cast<double>(n);
    const double ss_within =
        ss_w1 / static_cast<double>(n1) + ss_w2 / static_cast<double>(n - n1);
    return (ss_total - ss_within) / (ss_within / static_cast<double>(n - 2));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in.good()) return "<missing:" + p.string() + ">";
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main() {
    Harness h;
    const fs::path work = fs::temp_directory_path() / "rockgen_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);

    // 1. Monte Carlo erases correlation, bootstrap preserves it.
    h.run(1, "independence signature", 5.0, [](std::string& detail) {
        const auto data = testfix::correlated_set("c1", 500, -0.7, 101);
        const auto mc = mc_generate(fit_monte_carlo(data, 7), 10000);
        const double r_mc = column_pearson(mc);
        const auto boot = bootstrap_generate(fit_bootstrap(data, 8), 10000);
        const double r_boot = column_pearson(boot);
        char buf[96];
        std::snprintf(buf, sizeof(buf), "r_mc=%.3f r_boot=%.3f", r_mc, r_boot);
        detail = buf;
        return std::abs(r_mc) < 0.1 && std::abs(r_boot + 0.7) < 0.1;
    });

    // 2. Marginal recovery and generation moments.
    h.run(2, "marginal recovery", 5.0, [](std::string& detail) {
        const std::size_t n = 10000;
        bool ok = true;

        Prng r1(201);
        std::vector<double> xs(n);
        for (double& x : xs) x = r1.normal(120.0, 15.0);
        const auto fn = fit_normal(xs);
        ok &= std::abs(fn.p1 - 120.0) < 3.0 * 15.0 / std::sqrt(double(n));
        ok &= std::abs(fn.p2 - 15.0) < 3.0 * 15.0 / std::sqrt(2.0 * n);

        Prng r2(202);
        for (double& x : xs) x = std::exp(r2.normal(0.8, 0.35));
        const auto fl = fit_lognormal(xs);
        ok &= std::abs(fl.p1 - 0.8) < 3.0 * 0.35 / std::sqrt(double(n));
        ok &= std::abs(fl.p2 - 0.35) < 3.0 * 0.35 / std::sqrt(2.0 * n);

        Prng r3(203);
        for (double& x : xs) x = r3.exponential(0.4);
        const auto fe = fit_exponential(xs);
        ok &= std::abs(fe.p1 - 0.4) < 3.0 * 0.4 / std::sqrt(double(n));
        if (!ok) detail = "parameter recovery outside 3 standard errors";

        // generation reproduces fitted moments within 2% for all three families
        Prng r4(204);
        std::vector<double> angles(n);
        for (double& x : angles) x = r4.normal(45.0, 8.0);
        MonteCarloModel m1;
        m1.seed = 11;
        m1.fits = {fn, fit_normal(angles), fl};
        MonteCarloModel m2 = m1;
        m2.seed = 12;
        m2.fits[2] = fe;
        for (const auto& model : {m1, m2}) {
            const auto gen = mc_generate(model, n);
            const auto s = summary_stats(gen);
            for (Parameter p : kParameters) {
                const auto& fit = model.fit(p);
                if (std::abs(s[p].mean - fit.model_mean()) / fit.model_mean() >= 0.02 ||
                    std::abs(s[p].std_dev - fit.model_std()) / fit.model_std() >= 0.02) {
                    ok = false;
                    detail = "generated moments off by more than 2% for " +
                             std::string(parameter_name(p));
                }
            }
        }
        return ok;
    });

    // 3. DDPM distribution recovery.
    h.run(3, "ddpm recovery", 180.0, [](std::string& detail) {
        const auto data = testfix::correlated_set("c3", 500, -0.7, 301);
        DdpmTrainConfig cfg;
        const auto model = train_ddpm(data, cfg, 302);
        const auto gen = ddpm_sample(model, 10000, 303);
        const auto so = summary_stats(data);
        const auto sg = summary_stats(gen);
        bool ok = true;
        for (Parameter p : kParameters) {
            if (std::abs(sg[p].mean - so[p].mean) > 0.1 * so[p].std_dev) ok = false;
            if (std::abs(sg[p].std_dev - so[p].std_dev) / so[p].std_dev > 0.15) ok = false;
        }
        const double r = column_pearson(gen);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "r_gen=%.3f", r);
        detail = buf;
        return ok && std::abs(r + 0.7) < 0.2;
    });

    // 4. GAN non-degeneracy.
    h.run(4, "gan non-degeneracy", 180.0, [](std::string& detail) {
        const auto data = testfix::correlated_set("c4", 500, -0.7, 401);
        GanTrainConfig cfg;
        GanTrainLog log;
        const auto model = train_gan(data, cfg, 402, &log);
        const auto gen = gan_generate(model, 10000, 403);
        const auto so = summary_stats(data);
        const auto sg = summary_stats(gen);
        bool ok = log.final_d_real_mean > 0.2 && log.final_d_real_mean < 0.8;
        for (Parameter p : kParameters) {
            if (sg[p].std_dev <= 0.4 * so[p].std_dev) ok = false;
        }
        char buf[64];
        std::snprintf(buf, sizeof(buf), "d_real_mean=%.3f", log.final_d_real_mean);
        detail = buf;
        return ok;
    });

    // 5. Metric oracle equivalence.
    h.run(5, "metric oracles", 60.0, [](std::string& detail) {
        bool ok = true;

        Prng rng(501);
        std::vector<double> a(30), b(40);
        for (double& x : a) x = rng.normal(0.0, 1.0);
        for (double& x : b) x = rng.normal(0.4, 1.3);
        if (std::abs(ks_two_sample(a, b).d - brute_force_ks_d(a, b)) > 1e-12) {
            ok = false;
            detail += "KS; ";
        }

        const std::vector<double> wa = {0.3, 1.7, 2.2};
        const std::vector<double> wb = {-0.5, 0.9, 1.1, 2.0, 3.4};
        if (std::abs(wasserstein_1d(wa, wb) - quadrature_w1(wa, wb)) > 1e-6) {
            ok = false;
            detail += "W1; ";
        }

        std::vector<double> ca(100);
        std::iota(ca.begin(), ca.end(), 1.0);
        std::vector<double> cb;
        for (int i = 1; i <= 10; ++i) cb.push_back(double(i));
        cb.push_back(15.0);
        cb.push_back(16.0);
        for (int base : {21, 31, 41, 51, 61, 71, 81, 91}) {
            for (int i = 0; i < 6; ++i) cb.push_back(double(base + i));
        }
        if (std::abs(chi_square_gof(ca, cb, 10).stat - 32.0 / 6.0) > 1e-9) {
            ok = false;
            detail += "chi2; ";
        }

        DiscontinuitySet o, g;
        o.name = "o";
        g.name = "g";
        o.records = {{100.0, 30.0, 1.0}, {120.0, 42.0, 2.0}, {140.0, 35.0, 1.5}};
        g.records = {{118.0, 40.0, 2.2}, {125.0, 44.0, 1.8}, {131.0, 38.0, 2.6}};
        g.source.kind = Provenance::Kind::Generated;
        std::vector<std::array<double, 3>> rows;
        for (const auto& r : o.records)
            rows.push_back({r.dip_direction, r.dip_angle, std::log(r.trace_length)});
        for (const auto& r : g.records)
            rows.push_back({r.dip_direction, r.dip_angle, std::log(r.trace_length)});
        for (std::size_t j = 0; j < 3; ++j) {
            double mu = 0.0;
            for (auto& r : rows) mu += r[j];
            mu /= 6.0;
            double var = 0.0;
            for (auto& r : rows) var += (r[j] - mu) * (r[j] - mu);
            const double sd = std::sqrt(var / 6.0);
            for (auto& r : rows) r[j] = (r[j] - mu) / sd;
        }
        const double f_obs =
            pairwise_pseudo_f(rows, {true, true, true, false, false, false}, 3);
        int ge = 0;
        for (int mask = 0; mask < 64; ++mask) {
            if (__builtin_popcount(mask) != 3) continue;
            std::vector<bool> labels(6);
            for (int i = 0; i < 6; ++i) labels[i] = (mask >> i) & 1;
            if (pairwise_pseudo_f(rows, labels, 3) >= f_obs - 1e-12) ++ge;
        }
        const double p_exact = ge / 20.0;
        const auto pr = permanova(o, g, 719, 1);
        if (std::abs(pr.f - f_obs) > 1e-9 || std::abs(pr.p - p_exact) > 0.01) {
            ok = false;
            detail += "permanova; ";
        }
        return ok;
    });

    // 6. KS null calibration.
    h.run(6, "ks null calibration", 60.0, [](std::string& detail) {
        Prng rng(231);
        std::vector<double> pvals;
        for (int trial = 0; trial < 500; ++trial) {
            std::vector<double> a(100), b(100);
            for (double& x : a) x = rng.normal();
            for (double& x : b) x = rng.normal();
            pvals.push_back(ks_two_sample(a, b).p);
        }
        std::sort(pvals.begin(), pvals.end());
        double d = 0.0;
        for (std::size_t i = 0; i < pvals.size(); ++i) {
            d = std::max(d, std::abs(double(i + 1) / pvals.size() - pvals[i]));
            d = std::max(d, std::abs(double(i) / pvals.size() - pvals[i]));
        }
        char buf[32];
        std::snprintf(buf, sizeof(buf), "D=%.4f", d);
        detail = buf;
        return d < 0.08;
    });

    // 7. Gradient check across all activation/head configurations.
    h.run(7, "gradient check", 60.0, [](std::string& detail) {
        double worst = 0.0;
        for (nn::Activation act : {nn::Activation::ReLU, nn::Activation::Tanh}) {
            for (nn::Head head : {nn::Head::Identity, nn::Head::Sigmoid}) {
                Prng rng(701);
                const std::size_t out_w = head == nn::Head::Sigmoid ? 1 : 3;
                nn::Mlp net = nn::init_mlp({3, 6, 5, out_w}, act, head, rng);
                nn::Matrix batch(4, 3);
                for (double& v : batch.data) v = rng.normal() + 0.01;
                nn::Matrix coeffs(4, out_w);
                for (double& v : coeffs.data) v = rng.uniform(-1.0, 1.0);

                auto loss = [&]() {
                    const nn::Matrix y = nn::forward(net, batch);
                    double acc = 0.0;
                    for (std::size_t i = 0; i < y.data.size(); ++i)
                        acc += coeffs.data[i] * y.data[i];
                    return acc;
                };
                nn::ForwardCache cache;
                nn::forward(net, batch, &cache);
                const auto grads = nn::backward(net, batch, cache, coeffs);
                const double hstep = 1e-5;
                for (std::size_t k = 0; k < net.layer_count(); ++k) {
                    for (std::size_t i = 0; i < net.weights[k].data.size(); ++i) {
                        double& p = net.weights[k].data[i];
                        const double saved = p;
                        p = saved + hstep;
                        const double up = loss();
                        p = saved - hstep;
                        const double dn = loss();
                        p = saved;
                        const double numeric = (up - dn) / (2.0 * hstep);
                        const double analytic = grads.weights[k].data[i];
                        const double denom =
                            std::max({std::abs(analytic), std::abs(numeric), 1e-6});
                        worst = std::max(worst, std::abs(analytic - numeric) / denom);
                    }
                }
            }
        }
        char buf[48];
        std::snprintf(buf, sizeof(buf), "max_rel_err=%.2e", worst);
        detail = buf;
        return worst < 1e-4;
    });

    // 8. Forward-diffusion equivalence and variance law.
    h.run(8, "forward diffusion", 60.0, [](std::string& detail) {
        bool ok = true;
        const auto s = NoiseSchedule::from_betas({0.1, 0.15, 0.2, 0.25, 0.3});
        const std::array<double, 3> x0 = {0.7, -0.4, 1.1};
        Prng rng(801);
        std::array<double, 3> x = x0;
        std::array<double, 3> composed = {0.0, 0.0, 0.0};
        for (std::size_t t = 1; t <= 5; ++t) {
            const std::array<double, 3> eps = {rng.normal(), rng.normal(), rng.normal()};
            const double a = 1.0 - s.beta[t - 1];
            for (std::size_t j = 0; j < 3; ++j) {
                x[j] = std::sqrt(a) * x[j] + std::sqrt(s.beta[t - 1]) * eps[j];
                composed[j] =
                    std::sqrt(a) * composed[j] + std::sqrt(s.beta[t - 1]) * eps[j];
            }
            std::array<double, 3> eff;
            for (std::size_t j = 0; j < 3; ++j)
                eff[j] = composed[j] / std::sqrt(1.0 - s.alpha_bar[t - 1]);
            const auto closed = forward_diffuse(x0, t, eff, s);
            for (std::size_t j = 0; j < 3; ++j) {
                if (std::abs(closed[j] - x[j]) > 1e-12) ok = false;
            }
        }
        if (!ok) detail += "closed form vs iteration; ";

        const auto lin = NoiseSchedule::linear(200);
        const std::array<double, 3> zero = {0.0, 0.0, 0.0};
        for (std::size_t t : {50u, 120u, 200u}) {
            const std::size_t n = 10000;
            double sq = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const std::array<double, 3> e = {rng.normal(), rng.normal(),
                                                 rng.normal()};
                sq += forward_diffuse(zero, t, e, lin)[0] *
                      forward_diffuse(zero, t, e, lin)[0];
            }
            const double var = sq / n;
            const double expected = 1.0 - lin.alpha_bar[t - 1];
            if (std::abs(var - expected) > 3.0 * expected * std::sqrt(2.0 / n)) {
                ok = false;
                detail += "variance law; ";
            }
        }
        return ok;
    });

    // 9. Scenario harness: engine ordering on the bundled catalog.
    h.run(9, "scenario harness ordering", 1800.0, [&work](std::string& detail) {
        const fs::path data_dir = work / "catalog";
        const std::string manifest =
            testfix::write_demo_catalog(data_dir.string(), 4242);

        RunConfig cfg;
        cfg.catalog_path = manifest;
        cfg.engines = {"monte_carlo", "bootstrap", "gan", "ddpm"};
        cfg.master_seed = 90;
        cfg.output_dir = (work / "out9").string();
        cfg.fixed_n = 4000;  // large generated sets stabilize the correlation estimates
        const auto result = run_compare(cfg);
        if (result.failures > 0) {
            detail = "pairs failed: " + std::to_string(result.failures);
            return false;
        }

        // aggregate frobenius over scenario III and IV datasets per engine
        std::map<std::string, double> sum;
        std::map<std::string, int> count;
        for (const auto& o : result.outcomes) {
            if (o.scenario != "III" && o.scenario != "IV") continue;
            sum[o.engine] += o.report.multivariate.frobenius_diff;
            count[o.engine] += 1;
        }
        std::map<std::string, double> avg;
        for (const auto& [eng, s] : sum) avg[eng] = s / count[eng];
        char buf[160];
        std::snprintf(buf, sizeof(buf), "mc=%.3f boot=%.3f gan=%.3f ddpm=%.3f",
                      avg["monte_carlo"], avg["bootstrap"], avg["gan"], avg["ddpm"]);
        detail = buf;
        return avg["bootstrap"] <= avg["gan"] && avg["bootstrap"] <= avg["ddpm"] &&
               avg["monte_carlo"] > avg["bootstrap"] &&
               avg["monte_carlo"] > avg["gan"] && avg["monte_carlo"] > avg["ddpm"];
    });

    // 10. Byte-identical reruns.
    h.run(10, "determinism", 600.0, [&work](std::string& detail) {
        const fs::path data_dir = work / "catalog10";
        fs::create_directories(data_dir);
        const auto d1 = testfix::correlated_set("small_a", 80, -0.5, 1);
        const auto d2 = testfix::correlated_set("small_b", 60, 0.3, 2);
        write_csv(d1, (data_dir / "small_a.csv").string());
        write_csv(d2, (data_dir / "small_b.csv").string());
        {
            std::ofstream m(data_dir / "catalog.json");
            m << "[{\"name\":\"small_a\",\"location\":\"a\",\"group\":1,"
                 "\"path\":\"small_a.csv\",\"count\":80,\"scenario\":\"III\"},"
                 "{\"name\":\"small_b\",\"location\":\"b\",\"group\":1,"
                 "\"path\":\"small_b.csv\",\"count\":60,\"scenario\":\"IV\"}]\n";
        }

        RunConfig cfg;
        cfg.catalog_path = (data_dir / "catalog.json").string();
        cfg.engines = {"monte_carlo", "bootstrap", "gan", "ddpm"};
        cfg.master_seed = 100;
        cfg.eval.permutations = 199;
        cfg.gan.epochs = 200;
        cfg.ddpm.steps = 200;

        cfg.output_dir = (work / "run_a").string();
        run_compare(cfg);
        cfg.output_dir = (work / "run_b").string();
        run_compare(cfg);

        for (const char* ds : {"small_a", "small_b"}) {
            for (const char* eng : {"monte_carlo", "bootstrap", "gan", "ddpm"}) {
                const fs::path pa = work / "run_a" / ds / eng;
                const fs::path pb = work / "run_b" / ds / eng;
                for (const auto& entry : fs::directory_iterator(pa)) {
                    const auto name = entry.path().filename();
                    if (slurp(pa / name) != slurp(pb / name)) {
                        detail = "differs: " + (fs::path(ds) / eng / name).string();
                        return false;
                    }
                }
            }
        }
        if (slurp(work / "run_a" / "summary.csv") !=
            slurp(work / "run_b" / "summary.csv")) {
            detail = "summary.csv differs";
            return false;
        }
        return true;
    });

    fs::remove_all(work);
    if (h.failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", h.failures);
    return 1;
}
