// Command-line front end: every library operation behind a subcommand with
// machine-readable output. Exit codes: 0 success, 1 domain error,
// 2 verification failure, 64 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <numbers>
#include <omp.h>
#include <optional>
#include <sstream>

#include "lsr/certificate.hpp"
#include "lsr/experiments.hpp"
#include "lsr/json_io.hpp"
#include "lsr/version.hpp"

namespace {

using nlohmann::json;

struct Output {
    std::string path;    // empty = stdout
    std::string format;  // "json" or "csv"
    json run_config;

    void emit_json(json doc) const {
        doc["tool_version"] = lsr::version_string;
        doc["run_config"] = run_config;
        write(doc.dump(2) + "\n");
    }
    void emit_csv(const std::string& body) const {
        std::ostringstream os;
        os << "# tool_version=" << lsr::version_string << " run_config=" << run_config.dump()
           << "\n"
           << body;
        write(os.str());
    }
    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream f(path);
        if (!f) throw std::runtime_error("cannot open output file: " + path);
        f << text;
    }
};

// Exact rational from a decimal string ("0.25", "-3", "7/2").
mpq_class parse_rational(const std::string& s) {
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        mpq_class v(mpz_class(s.substr(0, slash)), mpz_class(s.substr(slash + 1)));
        v.canonicalize();
        return v;
    }
    const auto dot = s.find('.');
    if (dot == std::string::npos) return mpq_class(mpz_class(s));
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const unsigned long frac = s.size() - dot - 1;
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
    mpq_class v(mpz_class(digits), den);
    v.canonicalize();
    return v;
}

lsr::Matrix2 parse_matrix(const std::vector<double>& entries, const std::string& name) {
    if (entries.size() != 4)
        throw CLI::ValidationError(name, "expected four comma-separated entries a11,a12,a21,a22");
    return {entries[0], entries[1], entries[2], entries[3]};
}

// Angle option: either radians as a decimal, or an exact rational multiple of
// pi (--theta-pi p/q) so that zero-product angles like pi/2 are exact in intent.
struct AngleArg {
    std::optional<double> radians;
    std::optional<std::string> pi_fraction;

    double value(const std::string& name) const {
        if (radians && pi_fraction)
            throw CLI::ValidationError(name, "give either radians or a pi fraction, not both");
        if (radians) return *radians;
        if (pi_fraction) return parse_rational(*pi_fraction).get_d() * std::numbers::pi;
        throw CLI::ValidationError(name, "an angle is required");
    }
    void attach(CLI::App* cmd, const std::string& base, const std::string& desc) {
        cmd->add_option("--" + base, radians, desc + " in radians");
        cmd->add_option("--" + base + "-pi", pi_fraction,
                        desc + " as a rational multiple of pi (p/q)");
    }
};

json config_of(const CLI::App* cmd) {
    json cfg;
    cfg["subcommand"] = cmd->get_name();
    json params = json::object();
    for (const CLI::Option* opt : cmd->get_options()) {
        if (opt->count() == 0 || opt->get_name().empty()) continue;
        const auto& rs = opt->results();
        params[opt->get_name()] = rs.size() == 1 ? json(rs[0]) : json(rs);
    }
    cfg["params"] = std::move(params);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lower spectral radius toolkit for rank-one/rotation matrix pairs"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    app.set_version_flag("--version", lsr::version_string);

    std::string out_path;
    std::string format = "json";
    int threads = 0;
    app.add_option("-o,--output", out_path, "output file (default stdout)");
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--threads", threads, "cap OpenMP worker threads");

    // reduce
    auto* cmd_reduce = app.add_subcommand("reduce", "canonical form of a pair (H, R)");
    std::vector<double> h_ent, r_ent;
    double reduce_tol = 1e-9;
    cmd_reduce->add_option("--H", h_ent, "H entries a11,a12,a21,a22")->delimiter(',')->required();
    cmd_reduce->add_option("--R", r_ent, "R entries a11,a12,a21,a22")->delimiter(',')->required();
    cmd_reduce->add_option("--tol", reduce_tol, "membership tolerance");

    // lsr
    auto* cmd_lsr = app.add_subcommand("lsr", "truncated lower-spectral-radius scan");
    double l_lambda = 1, l_alpha = 0;
    long l_N = 10000;
    double l_ztol = 1e-10;
    bool l_pern = false;
    AngleArg l_theta;
    cmd_lsr->add_option("--lambda", l_lambda, "lambda (nonzero)")->required();
    cmd_lsr->add_option("--alpha", l_alpha, "alpha")->required();
    l_theta.attach(cmd_lsr, "theta", "rotation angle");
    cmd_lsr->add_option("--N", l_N, "truncation depth");
    cmd_lsr->add_option("--zero-tol", l_ztol, "zero certification tolerance");
    cmd_lsr->add_flag("--per-n", l_pern, "include the per-n table");

    // zeros
    auto* cmd_zeros = app.add_subcommand("zeros", "zero products and zero-perturbations");
    double z_lambda = 1, z_alpha = 0;
    long z_M = 1000;
    double z_tol = 1e-10;
    long z_perturb = 0;
    AngleArg z_theta;
    cmd_zeros->add_option("--lambda", z_lambda)->required();
    cmd_zeros->add_option("--alpha", z_alpha)->required();
    z_theta.attach(cmd_zeros, "theta", "rotation angle");
    cmd_zeros->add_option("--M", z_M, "search bound for the zero product");
    cmd_zeros->add_option("--tol", z_tol, "certification tolerance");
    cmd_zeros->add_option("--perturb-m", z_perturb, "also report the nearest zero of xi_m");

    // enumerate
    auto* cmd_enum = app.add_subcommand("enumerate", "brute-force minimum growth table");
    std::vector<double> e_h, e_r;
    int e_L = 10;
    cmd_enum->add_option("--H", e_h)->delimiter(',')->required();
    cmd_enum->add_option("--R", e_r)->delimiter(',')->required();
    cmd_enum->add_option("--L", e_L, "maximum word length (<= 22)");

    // verify-newformula
    auto* cmd_nf = app.add_subcommand("verify-newformula", "exhaustive word lower-bound check");
    std::vector<double> n_h, n_r;
    int n_L = 10;
    cmd_nf->add_option("--H", n_h)->delimiter(',')->required();
    cmd_nf->add_option("--R", n_r)->delimiter(',')->required();
    cmd_nf->add_option("--L", n_L, "maximum word length (<= 22)");

    // forge
    auto* cmd_forge = app.add_subcommand("forge", "construct a non-finiteness certificate");
    std::string f_lambda = "1", f_K = "2", f_eps = "0.05";
    double f_alpha = 0, f_theta = 1.0;
    int f_steps = 3;
    long f_bmax = 50, f_checked = 1000, f_budget = 100000000;
    cmd_forge->add_option("--lambda", f_lambda, "lambda, decimal or p/q");
    cmd_forge->add_option("--alpha-target", f_alpha)->required();
    cmd_forge->add_option("--theta-target", f_theta)->required();
    cmd_forge->add_option("--K", f_K, "improvement ratio, > 1");
    cmd_forge->add_option("--eps", f_eps, "target tolerance");
    cmd_forge->add_option("--steps", f_steps, "extension quotients to append");
    cmd_forge->add_option("--b-max", f_bmax, "prime search cap");
    cmd_forge->add_option("--checked-to", f_checked, "requested verified range");
    cmd_forge->add_option("--budget", f_budget, "digit budget per quotient");

    // verify-cert
    auto* cmd_vc = app.add_subcommand("verify-cert", "re-check a certificate file bit-exactly");
    std::string vc_file;
    long vc_nmax = -1;
    cmd_vc->add_option("file", vc_file, "certificate JSON")->required();
    cmd_vc->add_option("--n-max", vc_nmax, "range to verify (default: the certified range)");

    // sample
    auto* cmd_sample = app.add_subcommand("sample", "seeded Monte-Carlo over theta");
    double s_lambda = 1, s_alpha = 0;
    long s_samples = 1000, s_N = 2000;
    std::uint64_t s_seed = 42;
    cmd_sample->add_option("--lambda", s_lambda)->required();
    cmd_sample->add_option("--alpha", s_alpha)->required();
    cmd_sample->add_option("--samples", s_samples);
    cmd_sample->add_option("--N", s_N, "truncation depth");
    cmd_sample->add_option("--seed", s_seed);

    // classify
    auto* cmd_cls = app.add_subcommand("classify", "evidence-based U1..U4 label for a pair");
    std::vector<double> c_h, c_r;
    long c_N = 10000, c_M = 1000;
    double c_tol = 1e-8;
    std::string c_cert;
    cmd_cls->add_option("--H", c_h)->delimiter(',')->required();
    cmd_cls->add_option("--R", c_r)->delimiter(',')->required();
    cmd_cls->add_option("--N", c_N, "scan truncation");
    cmd_cls->add_option("--M", c_M, "zero product search bound");
    cmd_cls->add_option("--tol", c_tol, "positivity threshold");
    cmd_cls->add_option("--certificate", c_cert, "non-finiteness certificate JSON file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return 64;
    }

    if (threads > 0) omp_set_num_threads(threads);
    CLI::App* cmd = app.get_subcommands().front();
    Output out{out_path, format, config_of(cmd)};

    try {
        if (cmd == cmd_reduce) {
            lsr::ReduceOptions opts;
            opts.membership_tol = reduce_tol;
            const lsr::CanonicalPair c =
                lsr::reduce(parse_matrix(h_ent, "--H"), parse_matrix(r_ent, "--R"), opts);
            out.emit_json(lsr::to_json(c));
        } else if (cmd == cmd_lsr) {
            lsr::LsrOptions opts;
            opts.zero_tol = l_ztol;
            opts.keep_per_n = l_pern;
            const lsr::LsrEstimate est =
                lsr::lsr_estimate(l_lambda, l_alpha, l_theta.value("--theta"), l_N, opts);
            out.emit_json(lsr::to_json(est));
        } else if (cmd == cmd_zeros) {
            const double theta = z_theta.value("--theta");
            json doc;
            const auto z = lsr::find_zero_product(z_lambda, z_alpha, theta, z_M, z_tol);
            doc["found"] = z.has_value();
            if (z) doc["zero_product"] = lsr::to_json(*z);
            if (z_perturb > 0) {
                const double tp = lsr::perturb_to_zero(z_lambda, z_alpha, theta, z_perturb);
                doc["perturbed_theta"] = tp;
                doc["perturbation"] = tp - theta;
                doc["residual"] = std::abs(lsr::hr_trace(z_lambda, z_alpha, tp, z_perturb));
            }
            out.emit_json(doc);
        } else if (cmd == cmd_enum) {
            const lsr::GrowthTable t =
                lsr::enumerate_min_growth(parse_matrix(e_h, "--H"), parse_matrix(e_r, "--R"), e_L);
            if (format == "csv")
                out.emit_csv(t.to_csv());
            else
                out.emit_json(lsr::to_json(t));
        } else if (cmd == cmd_nf) {
            const lsr::NewFormulaReport rep =
                lsr::verify_newformula(parse_matrix(n_h, "--H"), parse_matrix(n_r, "--R"), n_L);
            out.emit_json(lsr::to_json(rep));
            if (rep.violations > 0) return 2;
        } else if (cmd == cmd_forge) {
            lsr::ForgeOptions opts;
            opts.b_max = f_bmax;
            opts.checked_to = f_checked;
            opts.extend.digit_budget = f_budget;
            const lsr::NonFinitenessCertificate cert =
                lsr::forge_pair(parse_rational(f_lambda), f_alpha, f_theta, parse_rational(f_K),
                                parse_rational(f_eps), f_steps, opts);
            json doc = json::parse(lsr::certificate_to_json(cert));
            doc["run_config"] = out.run_config;
            out.write(doc.dump(2) + "\n");
            std::cerr << "certificate: b=" << cert.b.get_str() << " a=" << cert.a.get_str()
                      << " checked_to=" << cert.checked_to << " lsr_floor=" << cert.lsr_floor
                      << "\n";
        } else if (cmd == cmd_vc) {
            std::ifstream f(vc_file);
            if (!f) throw lsr::error(lsr::errc::not_in_domain, "cannot read " + vc_file);
            std::stringstream buf;
            buf << f.rdbuf();
            const lsr::NonFinitenessCertificate cert = lsr::certificate_from_json(buf.str());
            const long nmax = vc_nmax < 0 ? cert.checked_to : vc_nmax;
            const lsr::VerifyReport rep = lsr::verify_certificate(cert, nmax);
            json doc{{"ok", rep.ok},
                     {"checked_to", nmax},
                     {"seconds", rep.seconds},
                     {"delta_lower", rep.delta_lower.get_d()}};
            if (!rep.ok) {
                doc["failure"] = rep.failure;
                if (rep.offending_n >= 0) doc["offending_n"] = rep.offending_n;
            }
            out.emit_json(doc);
            if (!rep.ok) return 2;
        } else if (cmd == cmd_sample) {
            const lsr::MeasureStats st =
                lsr::sample_measure(s_lambda, s_alpha, s_samples, s_N, s_seed);
            if (format == "csv")
                out.emit_csv(st.to_csv());
            else
                out.emit_json(lsr::to_json(st));
        } else if (cmd == cmd_cls) {
            std::optional<lsr::NonFinitenessCertificate> cert;
            if (!c_cert.empty()) {
                std::ifstream f(c_cert);
                if (!f) throw lsr::error(lsr::errc::not_in_domain, "cannot read " + c_cert);
                std::stringstream buf;
                buf << f.rdbuf();
                cert = lsr::certificate_from_json(buf.str());
            }
            const lsr::PairClass pc =
                lsr::classify(parse_matrix(c_h, "--H"), parse_matrix(c_r, "--R"), c_N, c_M, c_tol,
                              cert ? &*cert : nullptr);
            out.emit_json(lsr::to_json(pc));
        }
    } catch (const lsr::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == lsr::errc::verification_failed ? 2 : 1;
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 64;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
