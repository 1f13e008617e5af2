#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hj/analysis.hpp"
#include "hj/problems.hpp"

namespace hj {

/// A fully resolved benchmark request.
struct RunSpec {
    std::string problem;
    std::vector<std::string> schemes; // empty = problem defaults
    FilterKind filter = FilterKind::cutoff;
    std::optional<double> eps_c1;
    std::optional<bool> limiter;
    std::optional<double> cfl;
    std::vector<int> levels; // empty = problem defaults
    std::string format = "md";
    std::string out;  // empty = stdout
    bool plot = false;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string fmt_error_paper(double e) {
    if (!std::isfinite(e)) return "NaN";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2E", e);
    return buf;
}

inline std::string fmt_error_full(double e) {
    if (!std::isfinite(e)) return "NaN";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", e);
    return buf;
}

inline std::string fmt_order(const std::optional<double>& o, bool markdown) {
    if (!o || !std::isfinite(*o)) return markdown ? "-" : "";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", *o);
    return buf;
}

inline const char* norm_label(NormKind k) {
    switch (k) {
    case NormKind::l1: return "L1";
    case NormKind::l2: return "L2";
    case NormKind::linf:
    default: return "Linf";
    }
}

} // namespace detail

struct SchemeColumn {
    std::string name;
    std::vector<ConvergenceRow> rows;
};

struct TableData {
    std::string problem_id;
    std::string problem_title;
    NormKind norm = NormKind::l2;
    std::vector<SchemeColumn> columns;
};

inline std::string emit_table_markdown(const TableData& t) {
    std::ostringstream os;
    os << "# " << t.problem_id << ": " << t.problem_title << " ("
       << detail::norm_label(t.norm) << " errors)\n\n";
    os << "| M | N |";
    for (const auto& c : t.columns) os << " " << c.name << " | order |";
    os << "\n|--:|--:|";
    for (size_t i = 0; i < t.columns.size(); ++i) os << "--:|--:|";
    os << "\n";
    const size_t nrows = t.columns.empty() ? 0 : t.columns.front().rows.size();
    for (size_t r = 0; r < nrows; ++r) {
        const auto& first = t.columns.front().rows[r];
        os << "| " << first.m << " | " << first.n << " |";
        for (const auto& c : t.columns) {
            const auto& row = c.rows[r];
            os << " " << detail::fmt_error_paper(row.error) << " | "
               << detail::fmt_order(row.order, true) << " |";
        }
        os << "\n";
    }
    return os.str();
}

inline std::string emit_table_csv(const TableData& t) {
    std::ostringstream os;
    os << "M,N";
    for (const auto& c : t.columns) os << ",error_" << c.name << ",order_" << c.name;
    os << "\n";
    const size_t nrows = t.columns.empty() ? 0 : t.columns.front().rows.size();
    for (size_t r = 0; r < nrows; ++r) {
        const auto& first = t.columns.front().rows[r];
        os << first.m << "," << first.n;
        for (const auto& c : t.columns) {
            const auto& row = c.rows[r];
            os << "," << detail::fmt_error_full(row.error) << ","
               << detail::fmt_order(row.order, false);
        }
        os << "\n";
    }
    return os.str();
}

/// Plain-text columns "x u exact" for external plotting.
inline std::string emit_plot_data(const Field1D& u, const std::function<double(double)>& exact,
                                  const std::string& header) {
    std::ostringstream os;
    os << "# " << header << "\n# x u exact\n";
    char buf[128];
    for (int j = 0; j < u.size(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", u.x(j), u(j), exact(u.x(j)));
        os << buf;
    }
    return os.str();
}

inline std::string emit_plot_data(const Field2D& u,
                                  const std::function<double(double, double)>& exact,
                                  const std::string& header) {
    std::ostringstream os;
    os << "# " << header << "\n# x y u exact\n";
    char buf[160];
    const Grid2D& g = u.grid();
    for (int i = 0; i < u.nx(); ++i)
        for (int j = 0; j < u.ny(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %.17g\n", g.x(i), g.y(j),
                          u(i, j), exact(g.x(i), g.y(j)));
            os << buf;
        }
    return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

/// Parse the arguments of the `run` subcommand (everything after "run").
inline RunSpec parse_run_args(const std::vector<std::string>& args) {
    RunSpec spec;
    CLI::App app{"filtered Hamilton-Jacobi benchmark runner"};
    app.name("hjbench run");

    std::string filter = "new";
    std::string limiter;
    double eps_c1 = -1.0, cfl = -1.0;

    app.add_option("--problem", spec.problem, "problem id (ex1a..ex7)")->required();
    app.add_option("--scheme", spec.schemes,
                   "scheme(s): monotone|centered|eno2|filtered-centered|filtered-eno2|sl")
        ->delimiter(',');
    app.add_option("--filter", filter, "filter shape: new|fo")
        ->check(CLI::IsMember({"new", "fo"}));
    app.add_option("--eps-c1", eps_c1, "override the linear epsilon coefficient");
    app.add_option("--limiter", limiter, "limiter override: off|on")
        ->check(CLI::IsMember({"off", "on"}));
    app.add_option("--levels", spec.levels, "mesh sizes, each double the previous")
        ->delimiter(',');
    app.add_option("--cfl", cfl, "Courant number override");
    app.add_option("--format", spec.format, "table format: csv|md")
        ->check(CLI::IsMember({"csv", "md"}));
    app.add_option("--out", spec.out, "output path (default stdout)");
    app.add_flag("--plot", spec.plot, "also write plot data of the finest level");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        throw UsageError(std::string("argument error: ") + e.what());
    }

    spec.filter = filter == "fo" ? FilterKind::froese_oberman : FilterKind::cutoff;
    if (!limiter.empty()) spec.limiter = limiter == "on";
    if (eps_c1 >= 0.0) spec.eps_c1 = eps_c1;
    if (cfl > 0.0) spec.cfl = cfl;

    bool known = false;
    for (const auto& id : problem_ids()) known = known || id == spec.problem;
    if (!known) throw UsageError("unknown problem id: " + spec.problem);

    for (const auto& s : spec.schemes) {
        SchemeVariant v;
        try {
            v = scheme_variant_from_name(s);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        if (is_problem_2d(spec.problem) &&
            (v == SchemeVariant::sl))
            throw UsageError("scheme 'sl' is only available for 1D problems");
    }
    return spec;
}

namespace detail {

inline RunOptions options_for(const RunSpec& spec, const std::string& scheme_name) {
    RunOptions opt;
    opt.variant = scheme_variant_from_name(scheme_name);
    opt.filter = spec.filter;
    opt.eps_c1 = spec.eps_c1;
    opt.limiter = spec.limiter;
    opt.cfl = spec.cfl;
    return opt;
}

inline std::string plot_path(const RunSpec& spec, const std::string& scheme, int m) {
    namespace fs = std::filesystem;
    fs::path dir = spec.out.empty() ? fs::path(".") : fs::path(spec.out).parent_path();
    if (dir.empty()) dir = ".";
    return (dir / (spec.problem + "_" + scheme + "_M" + std::to_string(m) + ".dat")).string();
}

} // namespace detail

/// Execute a parsed run: refinement table per scheme, optional plot files.
inline int execute_run(const RunSpec& spec, std::ostream& console) {
    TableData table;
    table.problem_id = spec.problem;

    if (is_problem_2d(spec.problem)) {
        const Problem2D p = problem_2d(spec.problem);
        table.problem_title = p.title;
        table.norm = p.table_norm;
        const auto levels = spec.levels.empty() ? p.default_levels : spec.levels;
        const auto schemes = spec.schemes.empty() ? p.default_schemes : spec.schemes;
        for (const auto& s : schemes) {
            const RunOptions opt = detail::options_for(spec, s);
            SchemeColumn col{s, {}};
            for (size_t k = 0; k < levels.size(); ++k) {
                auto lvl = run_level_2d(p, levels[k], opt);
                ConvergenceRow row;
                row.m = lvl.m;
                row.n = lvl.n;
                row.norms = lvl.norms;
                row.error = lvl.norms.pick(p.table_norm);
                row.diverged = lvl.diverged;
                if (!col.rows.empty())
                    row.order = convergence_order(col.rows.back().error, row.error);
                col.rows.push_back(std::move(row));
                if (spec.plot && k + 1 == levels.size()) {
                    auto exact_here = [&p](double x, double y) { return p.exact(p.tfinal, x, y); };
                    const std::string header = "problem=" + spec.problem + " scheme=" + s +
                                               " M=" + std::to_string(levels[k]);
                    write_file(detail::plot_path(spec, s, levels[k]),
                               emit_plot_data(lvl.u, exact_here, header));
                }
            }
            table.columns.push_back(std::move(col));
        }
    } else {
        const Problem1D p = problem_1d(spec.problem);
        table.problem_title = p.title;
        table.norm = p.table_norm;
        const auto levels = spec.levels.empty() ? p.default_levels : spec.levels;
        const auto schemes = spec.schemes.empty() ? p.default_schemes : spec.schemes;
        for (const auto& s : schemes) {
            const RunOptions opt = detail::options_for(spec, s);
            SchemeColumn col{s, {}};
            for (size_t k = 0; k < levels.size(); ++k) {
                auto lvl = run_level_1d(p, levels[k], opt);
                ConvergenceRow row;
                row.m = lvl.m;
                row.n = lvl.n;
                row.norms = lvl.norms;
                row.error = lvl.norms.pick(p.table_norm);
                row.diverged = lvl.diverged;
                if (!col.rows.empty())
                    row.order = convergence_order(col.rows.back().error, row.error);
                col.rows.push_back(std::move(row));
                if (spec.plot && k + 1 == levels.size()) {
                    const double t_eval = p.steady ? 0.0 : p.tfinal;
                    auto exact_here = [&p, t_eval](double x) { return p.exact(t_eval, x); };
                    const std::string header = "problem=" + spec.problem + " scheme=" + s +
                                               " M=" + std::to_string(levels[k]);
                    write_file(detail::plot_path(spec, s, levels[k]),
                               emit_plot_data(lvl.u, exact_here, header));
                }
            }
            table.columns.push_back(std::move(col));
        }
    }

    const std::string bytes =
        spec.format == "csv" ? emit_table_csv(table) : emit_table_markdown(table);
    if (spec.out.empty())
        console << bytes;
    else
        write_file(spec.out, bytes);
    return 0;
}

inline int cli_main(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty() || args[0] == "-h" || args[0] == "--help") {
        std::cout << "usage: hjbench run --problem <id> [--scheme s1,s2] [--filter new|fo]\n"
                     "                   [--eps-c1 c] [--limiter off|on] [--levels m1,m2,..]\n"
                     "                   [--cfl c] [--format csv|md] [--out path] [--plot]\n"
                     "problems: ex1a ex1b ex2 ex3 ex4 ex5 ex6 ex7\n";
        return args.empty() ? 2 : 0;
    }
    if (args[0] != "run") {
        std::cerr << "unknown command: " << args[0] << " (expected 'run')\n";
        return 2;
    }
    try {
        const RunSpec spec = parse_run_args({args.begin() + 1, args.end()});
        try {
            return execute_run(spec, std::cout);
        } catch (const std::invalid_argument& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    } catch (const UsageError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}

} // namespace hj
