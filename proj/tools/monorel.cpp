#include <CLI11.hpp>

#include <monorel/cli.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Exact calculus for monotone linear relations and their Fitzpatrick functions"};
    app.require_subcommand(1);

    std::string file;
    std::string order = "2";
    std::string point;
    bool closed_form = false;
    std::optional<int> oracle_budget;
    std::string suite = "all";
    int seeds = 25;
    int dim_max = 3;
    std::optional<std::string> inject_file;
    std::string kind;
    int dim = 1;
    std::uint64_t seed = 1;
    std::string out_path;

    CLI::App* analyze = app.add_subcommand("analyze", "Structural report for a relation file");
    analyze->add_option("file", file, "relation JSON file")->required();

    CLI::App* fitz = app.add_subcommand("fitz", "Evaluate a Fitzpatrick function at a point");
    fitz->add_option("file", file, "relation JSON file")->required();
    fitz->add_option("--order", order, "order n >= 2, or \"inf\"")->required();
    fitz->add_option("--point", point, "evaluation point \"x;x*\"")->required();
    fitz->add_flag("--closed-form", closed_form, "use the symmetric closed form");
    fitz->add_option("--oracle", oracle_budget, "sampled lower bound with this budget");

    CLI::App* verify = app.add_subcommand("verify", "Run a seeded verification suite");
    verify->add_option("--suite", suite, "new1|fs6|bb|sz|bracket|all")
        ->check(CLI::IsMember({"new1", "fs6", "bb", "sz", "bracket", "all"}));
    verify->add_option("--seeds", seeds, "number of seeds");
    verify->add_option("--dim-max", dim_max, "largest ambient dimension");
    verify->add_option("--file", inject_file, "verify this relation file instead of seeded instances");

    CLI::App* random = app.add_subcommand("random", "Generate a seeded relation file");
    random->add_option("--kind", kind, "relation kind")
        ->required()
        ->check(CLI::IsMember({"symmetric_maximal", "skew", "general_monotone",
                               "nonmaximal_monotone"}));
    random->add_option("--dim", dim, "ambient dimension d")->required();
    random->add_option("--seed", seed, "generator seed")->required();
    random->add_option("--out", out_path, "output file")->required();

    CLI11_PARSE(app, argc, argv);

    monorel::Tolerances tol = monorel::cli::env_tolerances(std::cerr);
    if (analyze->parsed())
        return monorel::cli::cmd_analyze(file, std::cout, std::cerr, tol);
    if (fitz->parsed())
        return monorel::cli::cmd_fitz(file, order, point, closed_form, oracle_budget,
                                      std::cout, std::cerr, tol);
    if (verify->parsed())
        return monorel::cli::cmd_verify(suite, seeds, dim_max, inject_file, std::cout,
                                        std::cerr, tol);
    if (random->parsed())
        return monorel::cli::cmd_random(kind, dim, seed, out_path, std::cout,
                                        std::cerr, tol);
    return monorel::cli::exit_ok;
}
