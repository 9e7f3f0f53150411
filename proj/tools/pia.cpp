// Batch front end: scalar / coupled / abstract / verify runs over job files
// or the bundled examples.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "pia/pia.hpp"

namespace fs = std::filesystem;
using namespace pia;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitJobFile = 3;
constexpr int kExitEngine = 4;
constexpr int kExitVerify = 5;

struct CommonArgs {
    std::string job_path, example, out_dir = ".", stem;
    std::string output, fractions;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw JobError("cannot open job file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// job text + default stem from --job/--example
std::pair<std::string, std::string> job_text(const CommonArgs& c) {
    if (!c.job_path.empty() && !c.example.empty())
        throw JobError("give either --job or --example, not both");
    if (!c.job_path.empty()) return {slurp(c.job_path), fs::path(c.job_path).stem().string()};
    if (!c.example.empty()) return {bundled_job(c.example), c.example};
    throw JobError("one of --job or --example is required");
}

void apply_render_overrides(RenderSpec& spec, const CommonArgs& c) {
    if (!c.output.empty()) {
        if (c.output == "o") spec.form = OutputForm::Plain;
        else if (c.output == "t") spec.form = OutputForm::TeX;
        else if (c.output == "f") spec.form = OutputForm::Fortran;
        else throw TypeMismatch("--output expects o/t/f");
    }
    if (!c.fractions.empty()) {
        if (c.fractions == "s") spec.fractions = FractionStyle::SimpleFractions;
        else if (c.fractions == "c") spec.fractions = FractionStyle::CommonDenominator;
        else if (c.fractions == "n") spec.fractions = FractionStyle::None;
        else throw TypeMismatch("--fractions expects s/c/n");
    }
}

std::string write_result_file(const CommonArgs& c, OutputForm form, const std::string& body) {
    std::string stem = c.stem.empty() ? "run" : c.stem;
    fs::path path = fs::path(c.out_dir) / (stem + result_extension(form));
    fs::create_directories(c.out_dir);
    std::ofstream out(path);
    if (!out) throw Error("cannot write result file: " + path.string());
    out << body;
    return path.string();
}

void add_common(CLI::App* cmd, CommonArgs& c) {
    cmd->add_option("--job", c.job_path, "job file path");
    cmd->add_option("--example", c.example, "bundled example name");
    cmd->add_option("--out-dir", c.out_dir, "output directory");
    cmd->add_option("--stem", c.stem, "result file stem (default: job/example name)");
    cmd->add_option("--output", c.output, "output form o/t/f");
    cmd->add_option("--fractions", c.fractions, "fraction style s/c/n");
}

bool parse_yn_flag(const std::string& name, const std::string& v) {
    if (v == "y") return true;
    if (v == "n") return false;
    throw TypeMismatch(name + " expects y or n");
}

struct ScalarArgs {
    CommonArgs common;
    int nmax = 0;
    std::string input_mode, variable;
};

struct CoupledArgs {
    CommonArgs common;
    int mmax = 0;
    std::string branch, hermitian, theory, normalize, trig, theta, simplify, g_factor, append;
    int simplify_max_order = -1;
};

ScalarProblem make_scalar(const ScalarArgs& a, std::string* stem) {
    auto [text, default_stem] = job_text(a.common);
    *stem = a.common.stem.empty() ? default_stem : a.common.stem;
    JobFile job = parse_job(text);
    if (job.kind != JobKind::Scalar) throw JobError("job kind is not scalar");
    ScalarProblem p = job.scalar;
    if (a.nmax > 0) p.nmax = a.nmax;
    if (!a.input_mode.empty()) {
        if (a.input_mode == "i") p.input_mode = InputMode::Explicit;
        else if (a.input_mode == "g") p.input_mode = InputMode::General;
        else throw TypeMismatch("--input-mode expects i/g");
    }
    if (!a.variable.empty()) {
        if (a.variable == "x") p.variable = VariableChoice::X;
        else if (a.variable == "z") p.variable = VariableChoice::Zeta;
        else throw TypeMismatch("--variable expects x/z");
        if (p.variable == VariableChoice::Zeta && p.input_mode == InputMode::Explicit)
            throw TypeMismatch("the zeta variable requires general input mode");
    }
    apply_render_overrides(p.render, a.common);
    p.render.var = p.var_name();
    return p;
}

CoupledProblem make_coupled(const CoupledArgs& a, std::string* stem) {
    auto [text, default_stem] = job_text(a.common);
    *stem = a.common.stem.empty() ? default_stem : a.common.stem;
    JobFile job = parse_job(text);
    if (job.kind != JobKind::Coupled) throw JobError("job kind is not coupled");
    CoupledProblem p = job.coupled;
    if (a.mmax > 0) p.mmax = a.mmax;
    if (!a.branch.empty()) {
        if (a.branch == "m") p.branch = Branch::Minus;
        else if (a.branch == "p") p.branch = Branch::Plus;
        else throw TypeMismatch("--branch expects m/p");
    }
    if (!a.hermitian.empty()) {
        if (a.hermitian == "h") p.hermitian = Hermiticity::Hermitian;
        else if (a.hermitian == "n") p.hermitian = Hermiticity::NonHermitian;
        else throw TypeMismatch("--hermitian expects h/n");
    }
    if (!a.theory.empty()) {
        if (a.theory == "s") p.theory = TheoryVariant::Simplified;
        else if (a.theory == "f") p.theory = TheoryVariant::Fulling;
        else if (a.theory == "w") p.theory = TheoryVariant::Wronskian;
        else throw TypeMismatch("--theory expects s/f/w");
    }
    if (p.hermitian == Hermiticity::NonHermitian) p.theory = TheoryVariant::Simplified;
    if (!a.normalize.empty()) p.normalize = parse_yn_flag("--normalize", a.normalize);
    if (!a.trig.empty()) p.trig_expand_flag = parse_yn_flag("--trig-expand", a.trig);
    if (!a.theta.empty()) p.integrate_theta = parse_yn_flag("--theta", a.theta);
    if (!a.simplify.empty()) p.simplify_results = parse_yn_flag("--simplify", a.simplify);
    if (a.simplify_max_order >= 0) p.simplify_max_order = a.simplify_max_order;
    if (!a.g_factor.empty()) p.g_factor = expand_definitions(parse_expr(a.g_factor), p.defs);
    apply_render_overrides(p.render, a.common);
    return p;
}

int run_with_exit_codes(const std::function<void()>& body) {
    try {
        body();
        return kExitOk;
    } catch (const SyntaxError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitJobFile;
    } catch (const JobError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitJobFile;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEngine;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"phase-integral correction generator (scalar and coupled 2x2)"};
    app.require_subcommand(1);

    ScalarArgs sa;
    CLI::App* scalar_cmd = app.add_subcommand("scalar", "Y_2n corrections for one ODE");
    add_common(scalar_cmd, sa.common);
    scalar_cmd->add_option("--nmax", sa.nmax, "highest n in Y_2n");
    scalar_cmd->add_option("--input-mode", sa.input_mode, "i (explicit R, a) or g (general)");
    scalar_cmd->add_option("--variable", sa.variable, "x or z (zeta), general mode only");

    CoupledArgs ca;
    CLI::App* coupled_cmd = app.add_subcommand("coupled", "Y_m / s_m corrections for two ODEs");
    add_common(coupled_cmd, ca.common);
    coupled_cmd->add_option("--mmax", ca.mmax, "highest order m");
    coupled_cmd->add_option("--branch", ca.branch, "Qsq with minus/plus sqrt(Delta): m/p");
    coupled_cmd->add_option("--hermitian", ca.hermitian, "h or n");
    coupled_cmd->add_option("--theory", ca.theory, "s(implied)/f(ulling)/w(ronskian)");
    coupled_cmd->add_option("--normalize", ca.normalize, "normalized eigenvector, y/n");
    coupled_cmd->add_option("--trig-expand", ca.trig, "expand trig products, y/n");
    coupled_cmd->add_option("--theta", ca.theta, "integrate the gauge phase theta, y/n");
    coupled_cmd->add_option("--g-factor", ca.g_factor, "factor g(x) in the eigenvector");
    coupled_cmd->add_option("--simplify", ca.simplify, "simplify written results, y/n");
    coupled_cmd->add_option("--simplify-max-order", ca.simplify_max_order,
                            "highest order that is simplified on output");
    coupled_cmd->add_option("--append", ca.append,
                            "appended evaluation script path (or 'bundled')");

    struct {
        CommonArgs common;
        int mmax = 0;
        std::string variable, y1_zero;
    } aa;
    CLI::App* abstract_cmd = app.add_subcommand("abstract", "b_m recurrence with opaque sv, Y");
    abstract_cmd->add_option("--mmax", aa.mmax, "highest order m");
    abstract_cmd->add_option("--variable", aa.variable, "x or z");
    abstract_cmd->add_option("--y1-zero", aa.y1_zero, "assume Y1 = 0, y/n");
    abstract_cmd->add_option("--out-dir", aa.common.out_dir, "output directory");
    abstract_cmd->add_option("--stem", aa.common.stem, "result file stem");
    abstract_cmd->add_option("--output", aa.common.output, "output form o/t/f");
    abstract_cmd->add_option("--fractions", aa.common.fractions, "fraction style s/c/n");
    abstract_cmd->add_option("--job", aa.common.job_path, "job file path");
    abstract_cmd->add_option("--example", aa.common.example, "bundled example name");

    struct {
        ScalarArgs sargs;
        CoupledArgs cargs;
        std::vector<double> at;
        double rel_tol = 1e-10;
        int order = 0;
        bool high_precision = false;
        std::vector<std::string> params;
    } va;
    CLI::App* verify_cmd = app.add_subcommand("verify", "cross-check symbolic results with jets");
    add_common(verify_cmd, va.sargs.common);
    verify_cmd->add_option("--at", va.at, "evaluation point(s)");
    verify_cmd->add_option("--rel-tol", va.rel_tol, "relative tolerance");
    verify_cmd->add_option("--order", va.order, "jet truncation order");
    verify_cmd->add_flag("--high-precision", va.high_precision, "50-digit jets");
    verify_cmd->add_option("--param", va.params, "extra parameter binding name=value");
    verify_cmd->add_option("--nmax", va.sargs.nmax, "scalar order limit");
    verify_cmd->add_option("--mmax", va.cargs.mmax, "coupled order limit");
    verify_cmd->add_option("--branch", va.cargs.branch, "m/p");
    verify_cmd->add_option("--hermitian", va.cargs.hermitian, "h/n");
    verify_cmd->add_option("--theory", va.cargs.theory, "s/f/w");
    verify_cmd->add_option("--normalize", va.cargs.normalize, "y/n");
    verify_cmd->add_option("--trig-expand", va.cargs.trig, "y/n");
    verify_cmd->add_option("--g-factor", va.cargs.g_factor, "eigenvector factor");

    struct {
        std::string show;
    } ea;
    CLI::App* examples_cmd = app.add_subcommand("examples", "list bundled example jobs");
    examples_cmd->add_option("--show", ea.show, "print the named job file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    if (examples_cmd->parsed()) {
        return run_with_exit_codes([&] {
            if (!ea.show.empty()) {
                std::cout << bundled_job(ea.show);
                return;
            }
            for (const auto& name : bundled_job_names()) std::cout << name << "\n";
        });
    }

    if (scalar_cmd->parsed()) {
        return run_with_exit_codes([&] {
            std::string stem;
            ScalarProblem p = make_scalar(sa, &stem);
            apply_assumptions(p.positive);
            ScalarSeries s = scalar_corrections(p);
            ScalarRunTimings t;
            std::string body = write_scalar_result(p, s, &t);
            sa.common.stem = stem;
            std::string path = write_result_file(sa.common, p.render.form, body);
            std::cout << "wrote " << path << "\n";
            std::cout << "cpu: compute " << t.compute << " s, simplification " << t.simplify
                      << " s\n";
        });
    }

    if (coupled_cmd->parsed()) {
        return run_with_exit_codes([&] {
            std::string stem;
            CoupledProblem p = make_coupled(ca, &stem);
            apply_assumptions(p.positive);
            CoupledResult r = coupled_corrections(p);
            ScalarRunTimings t;
            std::string body = write_coupled_result(p, r, &t);
            if (!ca.append.empty()) {
                std::string script = ca.append == "bundled" && ca.common.example == "E"
                                         ? bundled_append_E()
                                         : slurp(ca.append);
                body += run_appended(p, r, script);
            }
            ca.common.stem = stem;
            std::string path = write_result_file(ca.common, p.render.form, body);
            std::cout << "wrote " << path << "\n";
            std::cout << "cpu: compute " << t.compute << " s, simplification " << t.simplify
                      << " s\n";
        });
    }

    if (abstract_cmd->parsed()) {
        return run_with_exit_codes([&] {
            AbstractProblem p;
            std::string stem = "abstract";
            if (!aa.common.job_path.empty() || !aa.common.example.empty()) {
                auto [text, default_stem] = job_text(aa.common);
                stem = default_stem;
                JobFile job = parse_job(text);
                if (job.kind != JobKind::Abstract) throw JobError("job kind is not abstract");
                p = job.abstract;
            }
            if (aa.mmax > 0) p.mmax = aa.mmax;
            if (!aa.variable.empty()) {
                if (aa.variable == "x") p.variable = VariableChoice::X;
                else if (aa.variable == "z") p.variable = VariableChoice::Zeta;
                else throw TypeMismatch("--variable expects x/z");
            }
            if (!aa.y1_zero.empty()) p.y1_zero = parse_yn_flag("--y1-zero", aa.y1_zero);
            apply_render_overrides(p.render, aa.common);
            p.render.var = p.var_name();
            Assumptions::instance().clear();
            AbstractSeries s = abstract_bvm(p);
            ScalarRunTimings t;
            std::string body = write_abstract_result(p, s, &t);
            if (!aa.common.stem.empty()) stem = aa.common.stem;
            aa.common.stem = stem;
            std::string path = write_result_file(aa.common, p.render.form, body);
            std::cout << "wrote " << path << "\n";
            std::cout << "cpu: compute " << t.compute << " s, simplification " << t.simplify
                      << " s\n";
        });
    }

    if (verify_cmd->parsed()) {
        bool failed = false;
        int rc = run_with_exit_codes([&] {
            VerifyOptions opt;
            opt.points = va.at;
            opt.rel_tol = va.rel_tol;
            opt.jet_order = va.order;
            for (const auto& pv : va.params) {
                auto eq = pv.find('=');
                if (eq == std::string::npos)
                    throw TypeMismatch("--param expects name=value, got '" + pv + "'");
                opt.params[pv.substr(0, eq)] = Complex(std::stod(pv.substr(eq + 1)), 0.0);
            }
            auto [text, default_stem] = job_text(va.sargs.common);
            JobFile job = parse_job(text);
            CompareReport rep;
            if (job.kind == JobKind::Scalar) {
                va.sargs.common.job_path.clear();
                va.sargs.common.example.clear();
                ScalarProblem p = job.scalar;
                if (va.sargs.nmax > 0) p.nmax = va.sargs.nmax;
                apply_assumptions(p.positive);
                if (opt.points.empty()) {
                    auto it = p.parrepls.find(p.var_name());
                    if (it == p.parrepls.end())
                        throw JobError("give --at points (job has no replacement for the variable)");
                    EvalContext<Complex> c0;
                    c0.order = 0;
                    opt.points.push_back(eval_value(it->second, c0).real());
                }
                ScalarSeries s = scalar_corrections(p);
                rep = va.high_precision ? verify_scalar<BigComplex>(p, s, opt)
                                        : verify_scalar<Complex>(p, s, opt);
            } else if (job.kind == JobKind::Coupled) {
                va.cargs.common = va.sargs.common;
                CoupledProblem p = job.coupled;
                if (va.cargs.mmax > 0) p.mmax = va.cargs.mmax;
                if (!va.cargs.branch.empty())
                    p.branch = va.cargs.branch == "p" ? Branch::Plus : Branch::Minus;
                if (!va.cargs.hermitian.empty())
                    p.hermitian = va.cargs.hermitian == "n" ? Hermiticity::NonHermitian
                                                            : Hermiticity::Hermitian;
                if (!va.cargs.theory.empty()) {
                    if (va.cargs.theory == "s") p.theory = TheoryVariant::Simplified;
                    else if (va.cargs.theory == "f") p.theory = TheoryVariant::Fulling;
                    else if (va.cargs.theory == "w") p.theory = TheoryVariant::Wronskian;
                }
                if (!va.cargs.normalize.empty())
                    p.normalize = parse_yn_flag("--normalize", va.cargs.normalize);
                if (!va.cargs.trig.empty())
                    p.trig_expand_flag = parse_yn_flag("--trig-expand", va.cargs.trig);
                if (!va.cargs.g_factor.empty())
                    p.g_factor = expand_definitions(parse_expr(va.cargs.g_factor), p.defs);
                apply_assumptions(p.positive);
                if (opt.points.empty()) {
                    auto it = p.parrepls.find("x");
                    if (it == p.parrepls.end())
                        throw JobError("give --at points (job has no replacement for x)");
                    EvalContext<Complex> c0;
                    c0.order = 0;
                    opt.points.push_back(eval_value(it->second, c0).real());
                }
                CoupledResult r = coupled_corrections(p);
                rep = va.high_precision ? verify_coupled<BigComplex>(p, r, opt)
                                        : verify_coupled<Complex>(p, r, opt);
            } else {
                throw JobError("verify supports scalar and coupled jobs");
            }
            std::cout << rep.to_string();
            failed = !rep.pass;
        });
        if (rc != kExitOk) return rc;
        return failed ? kExitVerify : kExitOk;
    }

    return kExitUsage;
}
