#pragma once

// Command-line front end.
//
// Subcommands:
//   alpha0                      regime-change angle for J(2n,-2m)
//   cs knot|orbifold|cover|lens Chern-Simons invariants
//   table paper-1|paper-2       reference tables over the standard parameter grid
//   trace                       node-by-node dump of the tracked branches
//
// Output formats: json (default), csv, md.  Scalar results are reported to
// 9 significant digits (12 for alpha0, which is resolved far beyond 1e-9).
// Exit codes: 0 success, 1 numerical failure, 2 domain error, 64 usage error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cs.hpp"

namespace knotcs::cli {

using nlohmann::json;

inline constexpr const char* kToolName = "knotcs";
inline constexpr const char* kToolVersion = "0.1.0";

namespace detail {

inline double round_sig(double v, int digits) {
    if (v == 0.0 || !std::isfinite(v)) return v;
    const double mag = std::floor(std::log10(std::abs(v)));
    const double scale = std::pow(10.0, digits - 1 - mag);
    return std::round(v * scale) / scale;
}

inline std::string fmt_sig(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

inline void emit_csv(std::ostream& out, const Table& t) {
    for (std::size_t i = 0; i < t.header.size(); ++i)
        out << t.header[i] << (i + 1 < t.header.size() ? "," : "\n");
    for (const auto& row : t.rows)
        for (std::size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "\n");
}

inline void emit_md(std::ostream& out, const Table& t) {
    out << "|";
    for (const auto& h : t.header) out << " " << h << " |";
    out << "\n|";
    for (std::size_t i = 0; i < t.header.size(); ++i) out << " --- |";
    out << "\n";
    for (const auto& row : t.rows) {
        out << "|";
        for (const auto& c : row) out << " " << c << " |";
        out << "\n";
    }
}

inline void emit(std::ostream& out, const std::string& format, const json& rec, const Table& t) {
    if (format == "json") out << rec.dump(2) << "\n";
    else if (format == "csv") emit_csv(out, t);
    else emit_md(out, t);
}

// BranchPath-style CSV dumps of the quadrature nodes (alpha,re_x,im_x,beta).
inline void write_cache(const std::string& path, const knotcs::detail::Assembly& a) {
    {
        std::ofstream f(path + ".hyperbolic.csv");
        if (!f) throw std::runtime_error("cache: cannot open " + path + ".hyperbolic.csv");
        f << "alpha,re_x,im_x,beta\n";
        for (std::size_t i = 0; i < a.hyp_alpha.size(); ++i)
            f << fmt_sig(a.hyp_alpha[i], 17) << "," << fmt_sig(a.hyp_x[i].real(), 17) << ","
              << fmt_sig(a.hyp_x[i].imag(), 17) << "," << fmt_sig(a.hyp_arg[i], 17) << "\n";
    }
    {
        std::ofstream f(path + ".spherical.csv");
        if (!f) throw std::runtime_error("cache: cannot open " + path + ".spherical.csv");
        f << "alpha,re_x,im_x,beta\n";
        for (std::size_t i = 0; i < a.sph_alpha.size(); ++i) {
            f << fmt_sig(a.sph_alpha[i], 17) << "," << fmt_sig(a.sph_x1[i], 17) << ",0,"
              << fmt_sig(a.sph_arg1[i], 17) << "\n";
            f << fmt_sig(a.sph_alpha[i], 17) << "," << fmt_sig(a.sph_x2[i], 17) << ",0,"
              << fmt_sig(a.sph_arg2[i], 17) << "\n";
        }
    }
}

inline std::string even_intervals_check(const std::string& s) {
    try {
        const int v = std::stoi(s);
        if (v < 2 || v % 2 != 0) return "must be even and at least 2";
    } catch (...) {
        return "must be an integer";
    }
    return {};
}

inline json meta_base() {
    return json{{"tool", kToolName}, {"version", kToolVersion}};
}

// The standard parameter grid of the reference tables.
inline const std::vector<KnotParams>& table1_params() {
    static const std::vector<KnotParams> v = {{1, 1}, {2, 1}, {3, 1}, {4, 1}, {2, 2},
                                              {3, 2}, {4, 2}, {3, 3}, {4, 3}, {4, 4}};
    return v;
}

inline const std::vector<KnotParams>& table2_params() {
    static const std::vector<KnotParams> v = {{2, 1}, {3, 1}, {4, 1}, {3, 2}, {4, 2}, {4, 3}};
    return v;
}

} // namespace detail

// Parse and execute; writes the result to `out`, diagnostics to `err`.
// Returns the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    using namespace detail;
    namespace kd = knotcs::detail;
    const double pi = std::numbers::pi;

    CLI::App app{"Chern-Simons invariants of cone-manifolds over the two-bridge knots J(2n,-2m)",
                 kToolName};
    app.require_subcommand(1);

    int n = 0, m = 0, k = 0;
    int hyp_intervals = -1, sph_intervals = -1, steps = 2000;
    double tol = 1e-12;
    std::string format = "json", cache_path, table_which;

    const auto add_nm = [&](CLI::App* cmd) {
        cmd->add_option("--n", n, "vertical half-twist count (n >= 1)")
            ->required()
            ->check(CLI::PositiveNumber);
        cmd->add_option("--m", m, "horizontal half-twist count (m >= 1)")
            ->required()
            ->check(CLI::PositiveNumber);
    };
    const auto add_format = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"json", "csv", "md"}));
    };
    const auto add_intervals = [&](CLI::App* cmd) {
        cmd->add_option("--hyp-intervals", hyp_intervals, "Simpson intervals on [lower, alpha0]")
            ->check(even_intervals_check);
        cmd->add_option("--sph-intervals", sph_intervals, "Simpson intervals on [alpha0, pi]")
            ->check(even_intervals_check);
    };

    CLI::App* a0cmd = app.add_subcommand("alpha0", "locate the spherical/hyperbolic regime change");
    add_nm(a0cmd);
    a0cmd->add_option("--tol", tol, "bisection tolerance (>= 1e-13)")
        ->check(CLI::Range(1e-13, 1.0));
    add_format(a0cmd);

    CLI::App* cscmd = app.add_subcommand("cs", "Chern-Simons invariants");
    cscmd->require_subcommand(1);
    CLI::App* knotcmd = cscmd->add_subcommand("knot", "knot complement (alpha -> 0), mod 1/2");
    CLI::App* orbcmd = cscmd->add_subcommand("orbifold", "cone-orbifold with angle 2*pi/k");
    CLI::App* covcmd = cscmd->add_subcommand("cover", "k-fold cyclic branched covering");
    CLI::App* lenscmd = cscmd->add_subcommand("lens", "exact lens-space contribution, mod 1");
    for (CLI::App* c : {knotcmd, orbcmd, covcmd, lenscmd}) {
        add_nm(c);
        add_format(c);
    }
    for (CLI::App* c : {knotcmd, orbcmd, covcmd}) {
        add_intervals(c);
        c->add_option("--cache", cache_path, "write quadrature-node CSVs to <path>.{hyperbolic,spherical}.csv");
    }
    for (CLI::App* c : {orbcmd, covcmd})
        c->add_option("--k", k, "cone order (k >= 3)")->required()->check(CLI::Range(3, 1 << 20));

    CLI::App* tblcmd = app.add_subcommand("table", "reference tables over the standard grid");
    tblcmd->add_option("which", table_which, "paper-1 (alpha0 + knot cs) or paper-2 (orbifold + cover)")
        ->required()
        ->check(CLI::IsMember({"paper-1", "paper-2"}));
    add_intervals(tblcmd);
    add_format(tblcmd);

    CLI::App* trcmd = app.add_subcommand("trace", "dump tracked branch nodes (alpha,re_x,im_x,beta)");
    add_nm(trcmd);
    trcmd->add_option("--steps", steps, "nodes per regime (even, >= 2)")->check(even_intervals_check);
    add_format(trcmd);

    std::vector<const char*> argv;
    argv.push_back(kToolName);
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 64;
    }

    try {
        if (*a0cmd) {
            const Alpha0Result r = find_alpha0({n, m}, tol);
            json rec;
            rec["command"] = "alpha0";
            rec["inputs"] = {{"n", n}, {"m", m}, {"tol", tol}};
            rec["result"] = {{"alpha0", round_sig(r.alpha0, 12)},
                             {"collision_gap", round_sig(r.collision_gap, 9)}};
            rec["meta"] = meta_base();
            Table t{{"command", "n", "m", "alpha0", "collision_gap"},
                    {{"alpha0", std::to_string(n), std::to_string(m), fmt_sig(r.alpha0, 12),
                      fmt_sig(r.collision_gap, 9)}}};
            emit(out, format, rec, t);
            return 0;
        }

        if (*lenscmd) {
            const ModValue r = lens_cs({n, m});
            const long q = 4L * n * m + 1;
            long num = (m - n) % q;
            if (num < 0) num += q;
            json rec;
            rec["command"] = "cs lens";
            rec["inputs"] = {{"n", n}, {"m", m}};
            rec["result"] = {{"value", round_sig(r.value, 9)}, {"modulus", r.modulus}};
            rec["meta"] = meta_base();
            rec["meta"]["fraction"] = std::to_string(num) + "/" + std::to_string(q);
            Table t{{"command", "n", "m", "value", "modulus"},
                    {{"cs lens", std::to_string(n), std::to_string(m), fmt_sig(r.value, 9),
                      fmt_sig(r.modulus, 9)}}};
            emit(out, format, rec, t);
            return 0;
        }

        if (*knotcmd || *orbcmd || *covcmd) {
            const bool is_knot = static_cast<bool>(*knotcmd);
            const int nh = hyp_intervals > 0 ? hyp_intervals : (is_knot ? 20000 : 200);
            const int ns = sph_intervals > 0 ? sph_intervals : (is_knot ? 20000 : 200);
            const KnotParams p{n, m};

            double lower = 0.0;
            const kd::Alpha0Detail ad = kd::locate_alpha0(n, m);
            if (!is_knot) {
                lower = 2.0 * pi / k;
                if (!(lower < ad.alpha0 - 1e-9))
                    throw std::domain_error(
                        "cs_orbifold: cone angle 2*pi/k is not below alpha0; the orbifold is not hyperbolic");
            }
            const kd::Assembly a = kd::assemble(p, lower, nh, ns, &ad);
            if (!cache_path.empty()) write_cache(cache_path, a);

            std::string command;
            ModValue r{};
            json meta = meta_base();
            meta["alpha0"] = round_sig(a.alpha0, 12);
            json inputs = {{"n", n}, {"m", m}, {"hyp_intervals", nh}, {"sph_intervals", ns}};
            if (is_knot) {
                command = "cs knot";
                r = {mod_reduce(a.total_raw, 0.5), 0.5};
            } else {
                inputs["k"] = k;
                const double orb_mod = (k % 2 == 0) ? 1.0 / k : 0.5 / k;
                const ModValue orb{mod_reduce(a.total_raw, orb_mod), orb_mod};
                if (*orbcmd) {
                    command = "cs orbifold";
                    r = orb;
                } else {
                    command = "cs cover";
                    const double cov_mod = (k % 2 == 0) ? 1.0 : 0.5;
                    r = {mod_reduce(k * orb.value, cov_mod), cov_mod};
                    meta["orbifold_value"] = round_sig(orb.value, 9);
                    meta["orbifold_modulus"] = round_sig(orb.modulus, 9);
                }
            }
            json rec;
            rec["command"] = command;
            rec["inputs"] = inputs;
            rec["result"] = {{"value", round_sig(r.value, 9)}, {"modulus", round_sig(r.modulus, 9)}};
            rec["meta"] = meta;
            Table t{{"command", "n", "m", "k", "value", "modulus"},
                    {{command, std::to_string(n), std::to_string(m),
                      is_knot ? std::string("-") : std::to_string(k), fmt_sig(r.value, 9),
                      fmt_sig(r.modulus, 9)}}};
            emit(out, format, rec, t);
            return 0;
        }

        if (*tblcmd) {
            json rec;
            rec["command"] = "table " + table_which;
            rec["meta"] = meta_base();
            json rows = json::array();
            Table t;
            if (table_which == "paper-1") {
                const int nh = hyp_intervals > 0 ? hyp_intervals : 20000;
                const int ns = sph_intervals > 0 ? sph_intervals : 20000;
                rec["inputs"] = {{"hyp_intervals", nh}, {"sph_intervals", ns}};
                t.header = {"two_n", "two_m", "alpha0", "cs"};
                for (const KnotParams& p : table1_params()) {
                    const kd::Alpha0Detail ad = kd::locate_alpha0(p.n, p.m);
                    const kd::Assembly a = kd::assemble(p, 0.0, nh, ns, &ad);
                    const double cs = mod_reduce(a.total_raw, 0.5);
                    rows.push_back({{"two_n", 2 * p.n},
                                    {"two_m", 2 * p.m},
                                    {"alpha0", round_sig(ad.alpha0, 12)},
                                    {"cs", round_sig(cs, 9)}});
                    t.rows.push_back({std::to_string(2 * p.n), std::to_string(2 * p.m),
                                      fmt_sig(ad.alpha0, 12), fmt_sig(cs, 9)});
                }
            } else {
                const int nh = hyp_intervals > 0 ? hyp_intervals : 200;
                const int ns = sph_intervals > 0 ? sph_intervals : 200;
                rec["inputs"] = {{"hyp_intervals", nh}, {"sph_intervals", ns}};
                t.header = {"two_n", "two_m", "k", "cs_orbifold", "cs_cover"};
                for (const KnotParams& p : table2_params()) {
                    const kd::Alpha0Detail ad = kd::locate_alpha0(p.n, p.m);
                    for (int kk = 3; kk <= 10; ++kk) {
                        const kd::Assembly a = kd::assemble(p, 2.0 * pi / kk, nh, ns, &ad);
                        const double orb_mod = (kk % 2 == 0) ? 1.0 / kk : 0.5 / kk;
                        const double orb = mod_reduce(a.total_raw, orb_mod);
                        const double cov_mod = (kk % 2 == 0) ? 1.0 : 0.5;
                        const double cov = mod_reduce(kk * orb, cov_mod);
                        rows.push_back({{"two_n", 2 * p.n},
                                        {"two_m", 2 * p.m},
                                        {"k", kk},
                                        {"cs_orbifold", round_sig(orb, 9)},
                                        {"cs_cover", round_sig(cov, 9)}});
                        t.rows.push_back({std::to_string(2 * p.n), std::to_string(2 * p.m),
                                          std::to_string(kk), fmt_sig(orb, 9), fmt_sig(cov, 9)});
                    }
                }
            }
            rec["result"] = {{"rows", rows}};
            emit(out, format, rec, t);
            return 0;
        }

        if (*trcmd) {
            const kd::Assembly a = kd::assemble({n, m}, 0.0, steps, steps);
            json rec;
            rec["command"] = "trace";
            rec["inputs"] = {{"n", n}, {"m", m}, {"steps", steps}};
            rec["meta"] = meta_base();
            rec["meta"]["alpha0"] = round_sig(a.alpha0, 12);
            json rows = json::array();
            Table t;
            t.header = {"alpha", "re_x", "im_x", "beta"};
            const auto add_row = [&](double alpha, double rx, double ix, double beta) {
                rows.push_back({{"alpha", round_sig(alpha, 9)},
                                {"re_x", round_sig(rx, 9)},
                                {"im_x", round_sig(ix, 9)},
                                {"beta", round_sig(beta, 9)}});
                t.rows.push_back({fmt_sig(alpha, 9), fmt_sig(rx, 9), fmt_sig(ix, 9), fmt_sig(beta, 9)});
            };
            for (std::size_t i = 0; i < a.hyp_alpha.size(); ++i)
                add_row(a.hyp_alpha[i], a.hyp_x[i].real(), a.hyp_x[i].imag(), a.hyp_arg[i]);
            for (std::size_t i = 0; i < a.sph_alpha.size(); ++i) {
                add_row(a.sph_alpha[i], a.sph_x1[i], 0.0, a.sph_arg1[i]);
                add_row(a.sph_alpha[i], a.sph_x2[i], 0.0, a.sph_arg2[i]);
            }
            rec["result"] = {{"alpha0", round_sig(a.alpha0, 12)}, {"rows", rows}};
            emit(out, format, rec, t);
            return 0;
        }
    } catch (const std::domain_error& e) {
        err << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace knotcs::cli
