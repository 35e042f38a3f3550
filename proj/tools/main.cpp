#include <CLI11.hpp>
#include <chrono>
#include <iostream>

#include "conelag/cli.hpp"

using namespace conelag;

int main(int argc, char** argv) {
    CLI::App app{"conelag: cone-process Lagrange multipliers and exact penalties"};
    app.require_subcommand(1);

    DispatchOptions opt;
    std::string out_path;
    std::string format = "text";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out_path, "write the report to this path as well");
        sub->add_option("--format", format, "report format: text|csv|json")
            ->check(CLI::IsMember({"text", "csv", "json"}));
        sub->add_option("--tol", opt.tol, "membership tolerance");
        sub->add_option("--seed", opt.seed, "seed for all sampled checks");
    };

    auto* nd = app.add_subcommand("nd", "nondominance of a point in a sampled set");
    nd->add_option("--points", opt.points_path, "points file, one vector per line")->required();
    nd->add_option("--cone", opt.cone_spec, "cone spec (inline JSON or path)")->required();
    nd->add_option("--y0", opt.y0_csv, "candidate point, comma-separated")->required();
    add_common(nd);

    auto* mn = app.add_subcommand("min", "minimal points of a sampled set");
    mn->add_option("--points", opt.points_path)->required();
    mn->add_option("--cone", opt.cone_spec)->required();
    add_common(mn);

    auto* di = app.add_subcommand("dilate", "epsilon-conic or Henig dilation of a cone");
    di->add_option("--cone", opt.cone_spec)->required();
    di->add_option("--eps", opt.eps, "dilation parameter")->required();
    di->add_flag("--henig", opt.henig, "dilate a base instead of the sphere cap");
    di->add_option("--level", opt.level, "base level for --henig");
    di->add_option("--point", opt.point_csv, "also test membership of this point");
    add_common(di);

    auto* ca = app.add_subcommand("check-assumptions",
                                  "structural conditions (a)-(c) of a process");
    ca->add_option("--problem", opt.problem_path)->required();
    add_common(ca);

    auto* fm = app.add_subcommand("find-multiplier", "constructive multiplier chain");
    fm->add_option("--problem", opt.problem_path)->required();
    fm->add_option("--delta", opt.delta, "nondegeneracy parameter in (0,1)");
    fm->add_option("--rho", opt.rho, "dilation choice in (0, delta/4)");
    fm->add_option("--safety", opt.safety, "safety factor on the Lipschitz estimate");
    fm->add_option("--y0", opt.y0_csv, "reference value override");
    add_common(fm);

    auto* pe = app.add_subcommand("penalize", "scalar exact penalization");
    pe->add_option("--problem", opt.problem_path)->required();
    pe->add_option("--mu", opt.mu, "penalty parameter, or 'auto'");
    pe->add_option("--safety", opt.safety);
    add_common(pe);

    auto* sw = app.add_subcommand("sweep", "penalty threshold sweep");
    sw->add_option("--problem", opt.problem_path)->required();
    sw->add_option("--sweep", opt.sweep, "mu grid start:stop:step")->required();
    sw->add_option("--csv", opt.csv_path, "write per-mu rows to this CSV");
    add_common(sw);

    auto* eq = app.add_subcommand("equilibrium", "discretized equilibrium instance");
    eq->add_option("--example", opt.example)->required();
    eq->add_option("--grid", opt.grid, "grid size N");
    eq->add_option("--samples", opt.samples, "sample count M");
    eq->add_option("--csv", opt.csv_path, "per-sample CSV");
    add_common(eq);

    auto* ex = app.add_subcommand("example", "reproduce a cataloged instance end to end");
    ex->add_option("name", opt.example, "3.8 | 3.9 | 5.4")->required();
    ex->add_option("--dim", opt.dim, "truncation dimension for 3.9");
    ex->add_option("--grid", opt.grid);
    ex->add_option("--samples", opt.samples);
    ex->add_option("--csv", opt.csv_path);
    add_common(ex);

    CLI11_PARSE(app, argc, argv);

    try {
        auto t0 = std::chrono::steady_clock::now();
        RunReport rep = dispatch(app.get_subcommands().front()->get_name(), opt);
        rep.timing_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
        std::string body = rep.render(format);
        std::cout << body;
        if (!out_path.empty()) cli_detail::write_file(out_path, body);
        std::cerr << "time: " << fmt_g(rep.timing_ms) << " ms\n";
        return rep.all_pass() ? 0 : 1;
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionMismatch& e) {
        std::cerr << "dimension error: " << e.what() << "\n";
        return 2;
    } catch (const UnknownCommand& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
