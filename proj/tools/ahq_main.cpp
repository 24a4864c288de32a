// Command-line front end: generate, validate, compute, boost, embed, extract,
// and verify asymptotically hyperbolic expansion data.

#include "CLI11.hpp"

#include "ahq/conserved.hpp"
#include "ahq/optimal_embedding.hpp"
#include "ahq/surface_geometry.hpp"
#include "ahq/verify.hpp"

#include <cstdio>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUndefined = 2;

struct CommonOpts {
    int band_limit = 32;
    std::uint64_t seed = 1;
};

void check_band_limit(int L) {
    if (L < 8 || L > 128)
        throw CLI::ValidationError("--band-limit must lie in [8, 128]");
}

std::vector<double> parse_radii(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ','))
        out.push_back(std::stod(tok));
    if (out.empty())
        throw CLI::ValidationError("--radii: empty list");
    for (size_t i = 0; i < out.size(); ++i) {
        if (out[i] < 10.0)
            throw CLI::ValidationError("--radii: radii must be >= 10");
        if (i > 0 && out[i] <= out[i - 1])
            throw CLI::ValidationError("--radii: radii must be strictly increasing");
    }
    return out;
}

int axis_index(const std::string& axis) {
    if (axis == "x" || axis == "1") return 1;
    if (axis == "y" || axis == "2") return 2;
    if (axis == "z" || axis == "3") return 3;
    throw CLI::ValidationError("--axis must be one of x, y, z (or 1, 2, 3)");
}

void write_record_line(std::FILE* f, const char* key, double v) { std::fprintf(f, "%s %.17g\n", key, v); }

void write_conserved_record(const ahq::ConservedSet& cs, int band_limit, const std::string& path) {
    std::FILE* f = path == "-" ? stdout : std::fopen(path.c_str(), "w");
    if (!f)
        throw std::runtime_error("cannot open " + path + " for writing");
    std::fprintf(f, "format_version 1\nband_limit %d\n", band_limit);
    write_record_line(f, "E", cs.E);
    write_record_line(f, "P1", cs.P[0]);
    write_record_line(f, "P2", cs.P[1]);
    write_record_line(f, "P3", cs.P[2]);
    if (cs.M_rest) {
        write_record_line(f, "M_rest", *cs.M_rest);
        write_record_line(f, "rest_a0", cs.rest_frame->a0);
        write_record_line(f, "rest_a1", cs.rest_frame->a[0]);
        write_record_line(f, "rest_a2", cs.rest_frame->a[1]);
        write_record_line(f, "rest_a3", cs.rest_frame->a[2]);
    } else {
        std::fprintf(f, "M_rest undefined %s\n", cs.rest_frame_reason.c_str());
    }
    if (cs.C) {
        write_record_line(f, "C1", (*cs.C)[0]);
        write_record_line(f, "C2", (*cs.C)[1]);
        write_record_line(f, "C3", (*cs.C)[2]);
        write_record_line(f, "J1", (*cs.J)[0]);
        write_record_line(f, "J2", (*cs.J)[1]);
        write_record_line(f, "J3", (*cs.J)[2]);
    } else {
        std::fprintf(f, "C undefined %s\nJ undefined %s\n", cs.com_reason.c_str(), cs.com_reason.c_str());
    }
    write_record_line(f, "vacuum_loss_rate", cs.vacuum_loss_rate);
    if (cs.matter_loss_rate)
        write_record_line(f, "matter_loss_rate", *cs.matter_loss_rate);
    else
        std::fprintf(f, "matter_loss_rate absent\n");
    std::fprintf(f, "end\n");
    if (f != stdout)
        std::fclose(f);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasi-local conserved quantities of asymptotically hyperbolic expansion data"};
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "generate a dataset and write it as a data file");
    std::string gen_kind = "random_bandlimited", gen_out;
    CommonOpts gen_c;
    double gen_m0 = 1.0, gen_amp = 1e-2;
    int gen_lmax = 8;
    bool gen_zero_p = false, gen_matter = false;
    gen->add_option("--kind", gen_kind,
                    "minkowski_hyperboloid | schwarzschild_aspect | random_bandlimited")
        ->capture_default_str();
    gen->add_option("--output", gen_out, "output data file")->required();
    gen->add_option("--band-limit", gen_c.band_limit, "grid band limit, in [8, 128]")->capture_default_str();
    gen->add_option("--seed", gen_c.seed, "random seed")->capture_default_str();
    gen->add_option("--m0", gen_m0, "mass parameter of schwarzschild_aspect")->capture_default_str();
    gen->add_option("--lmax", gen_lmax, "highest degree of random fields")->capture_default_str();
    gen->add_option("--amplitude", gen_amp, "amplitude of random fields")->capture_default_str();
    gen->add_flag("--zero-momentum", gen_zero_p, "project the linear momentum to zero");
    gen->add_flag("--with-matter", gen_matter, "include a random matter flux field");

    // ---- validate ----
    auto* val = app.add_subcommand("validate", "check a data file against the model invariants");
    std::string val_in;
    val->add_option("--input", val_in, "data file")->required();

    // ---- compute ----
    auto* comp = app.add_subcommand("compute", "evaluate the conserved-quantity record of a data file");
    std::string comp_in, comp_out = "-";
    bool comp_require_com = false;
    double comp_tol_momentum = ahq::kMomentumGate;
    comp->add_option("--input", comp_in, "data file")->required();
    comp->add_option("--output", comp_out, "record file ('-' = stdout)")->capture_default_str();
    comp->add_option("--tol-momentum", comp_tol_momentum,
                     "relative momentum gate below which the center of mass and angular momentum are defined")
        ->capture_default_str();
    comp->add_flag("--require-com", comp_require_com,
                   "exit with status 2 when the center of mass and angular momentum are undefined");

    // ---- boost ----
    auto* boost = app.add_subcommand("boost", "boosted energies over a rapidity scan");
    std::string boost_in, boost_axis = "z", boost_out = "-", boost_rapidities = "0.5";
    boost->add_option("--input", boost_in, "data file")->required();
    boost->add_option("--rapidity", boost_rapidities, "comma-separated rapidity list")->capture_default_str();
    boost->add_option("--axis", boost_axis, "boost axis: x, y, or z")->capture_default_str();
    boost->add_option("--output", boost_out,
                      "CSV output ('-' = stdout); columns: rapidity,axis,boost_energy,identity_residual")
        ->capture_default_str();

    // ---- embed ----
    auto* embed = app.add_subcommand("embed", "solve the leading-order optimal embedding equation");
    std::string embed_in, embed_out, embed_axis = "z";
    double embed_rapidity = 0.0;
    embed->add_option("--input", embed_in, "data file")->required();
    embed->add_option("--output", embed_out, "write the solved X0 coefficient field here");
    embed->add_option("--rapidity", embed_rapidity, "rapidity of the observer boost")->capture_default_str();
    embed->add_option("--axis", embed_axis, "axis of the observer boost")->capture_default_str();

    // ---- extract ----
    auto* extract = app.add_subcommand("extract", "fit the |H| expansion from finite-radius samples");
    std::string ex_in, ex_out = "-", ex_radii = "100,200,400,800", ex_prefix;
    extract->add_option("--input", ex_in, "data file")->required();
    extract->add_option("--radii", ex_radii, "comma-separated sample radii (>= 10, increasing)")
        ->capture_default_str();
    extract->add_option("--output", ex_out,
                        "CSV output ('-' = stdout); columns: radius,max_abs_residual,r4_weighted_residual")
        ->capture_default_str();
    extract->add_option("--coeff-prefix", ex_prefix,
                        "when set, write fitted coefficient fields to <prefix>_h_m2.field and <prefix>_h_m3.field");

    // ---- verify ----
    auto* verify = app.add_subcommand("verify", "run the full identity and invariant suite");
    ahq::VerifyOptions vopt;
    std::string verify_only, verify_fault;
    std::vector<std::string> tol_kv;
    verify->add_option("--seed", vopt.seed, "seed of the generated test data")->capture_default_str();
    verify->add_option("--band-limit", vopt.band_limit, "grid band limit")->capture_default_str();
    verify->add_option("--only", verify_only, "run a single check group");
    verify->add_option("--inject-fault", verify_fault,
                       "self-test hook; 'loss-sign' flips the vacuum loss rate inside the check");
    verify->add_option("--tol", tol_kv, "override a group tolerance, e.g. --tol boost-identity=1e-9")
        ->expected(-1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitFailure;
    }

    try {
        if (*gen) {
            check_band_limit(gen_c.band_limit);
            ahq::GridPtr grid = ahq::make_grid(gen_c.band_limit);
            ahq::AHExpansionData d = [&] {
                if (gen_kind == "minkowski_hyperboloid")
                    return ahq::generate_minkowski_hyperboloid(grid);
                if (gen_kind == "schwarzschild_aspect")
                    return ahq::generate_schwarzschild_aspect(grid, gen_m0);
                if (gen_kind == "random_bandlimited") {
                    ahq::RandomDataParams p;
                    p.seed = gen_c.seed;
                    p.lmax = gen_lmax;
                    p.amplitude = gen_amp;
                    p.zero_momentum = gen_zero_p;
                    p.with_matter = gen_matter;
                    return ahq::generate_random_bandlimited(grid, p);
                }
                throw std::invalid_argument("unknown kind '" + gen_kind + "'");
            }();
            ahq::write_data(d, gen_out);
            return kExitOk;
        }

        if (*val) {
            ahq::AHExpansionData d = ahq::read_data(val_in);
            ahq::ValidationReport rep = ahq::validate(d);
            std::cout << rep.to_string() << "\n";
            return rep.ok() ? kExitOk : kExitFailure;
        }

        if (*comp) {
            ahq::AHExpansionData d = ahq::read_data(comp_in);
            ahq::ValidationReport rep = ahq::validate(d);
            if (!rep.ok()) {
                std::cerr << "validation failed:\n" << rep.to_string();
                return kExitFailure;
            }
            ahq::ConservedSet cs = ahq::evaluate_conserved(d, comp_tol_momentum);
            write_conserved_record(cs, d.grid()->band_limit(), comp_out);
            if (comp_require_com && !cs.C) {
                std::cerr << "center of mass and angular momentum undefined: " << cs.com_reason << "\n";
                return kExitUndefined;
            }
            return kExitOk;
        }

        if (*boost) {
            ahq::AHExpansionData d = ahq::read_data(boost_in);
            const int axis = axis_index(boost_axis);
            ahq::EnergyMomentum ep = ahq::energy_momentum(d);
            std::FILE* f = boost_out == "-" ? stdout : std::fopen(boost_out.c_str(), "w");
            if (!f)
                throw std::runtime_error("cannot open " + boost_out);
            std::fprintf(f, "rapidity,axis,boost_energy,identity_residual\n");
            std::stringstream ss(boost_rapidities);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                const double rap = std::stod(tok);
                ahq::BoostVector a = ahq::BoostVector::from_rapidity(rap, axis);
                const double be = ahq::boost_energy(d, a);
                const double lin = a.a0 * ep.E + a.a[0] * ep.P[0] + a.a[1] * ep.P[1] + a.a[2] * ep.P[2];
                std::fprintf(f, "%.17g,%s,%.17g,%.17g\n", rap, boost_axis.c_str(), be, std::abs(be - lin));
            }
            if (f != stdout)
                std::fclose(f);
            return kExitOk;
        }

        if (*embed) {
            ahq::AHExpansionData d = ahq::read_data(embed_in);
            ahq::SphereExpansion e = ahq::coordinate_sphere_expansion(d);
            ahq::BoostVector a = embed_rapidity == 0.0
                                     ? ahq::BoostVector::identity()
                                     : ahq::BoostVector::from_rapidity(embed_rapidity, axis_index(embed_axis));
            ahq::OptimalSolution sol = ahq::solve_optimal_embedding(e.h_m2, a);
            std::printf("obstruction_l0 %.17g\n", sol.obstruction[0]);
            std::printf("obstruction_l1_m-1 %.17g\n", sol.obstruction[1]);
            std::printf("obstruction_l1_m0 %.17g\n", sol.obstruction[2]);
            std::printf("obstruction_l1_m+1 %.17g\n", sol.obstruction[3]);
            std::printf("solvable %s\n", sol.solvable ? "true" : "false");
            std::printf("pde_residual %.17g\n", sol.pde_residual);
            if (!embed_out.empty())
                ahq::write_field(sol.X0_0, "X0_0", embed_out);
            return kExitOk;
        }

        if (*extract) {
            ahq::AHExpansionData d = ahq::read_data(ex_in);
            const std::vector<double> radii = parse_radii(ex_radii);
            std::vector<ahq::ScalarField> curvatures = ahq::finite_r_mean_curvature(d, radii);
            std::vector<std::pair<double, ahq::ScalarField>> samples;
            for (size_t i = 0; i < radii.size(); ++i) {
                const double base = ahq::hyperboloid_mean_curvature(radii[i]);
                for (double& v : curvatures[i].values())
                    v -= base;
                samples.emplace_back(radii[i], std::move(curvatures[i]));
            }
            ahq::ExpansionFit fit = ahq::extract_expansion(samples, {2, 3});
            std::FILE* f = ex_out == "-" ? stdout : std::fopen(ex_out.c_str(), "w");
            if (!f)
                throw std::runtime_error("cannot open " + ex_out);
            std::fprintf(f, "radius,max_abs_residual,r4_weighted_residual\n");
            for (const auto& [r, sample] : samples) {
                double worst = 0.0;
                for (int j = 0; j < d.grid()->nlat(); ++j)
                    for (int k = 0; k < d.grid()->nlon(); ++k) {
                        double fitv = 0.0;
                        for (size_t q = 0; q < fit.orders.size(); ++q)
                            fitv += fit.coeffs[q](j, k) * std::pow(r, -fit.orders[q]);
                        worst = std::max(worst, std::abs(fitv - sample(j, k)));
                    }
                std::fprintf(f, "%.17g,%.17g,%.17g\n", r, worst, worst * std::pow(r, 4.0));
            }
            if (f != stdout)
                std::fclose(f);
            if (!ex_prefix.empty()) {
                ahq::write_field(fit.coeffs[0], "h_m2", ex_prefix + "_h_m2.field");
                ahq::write_field(fit.coeffs[1], "h_m3", ex_prefix + "_h_m3.field");
            }
            return kExitOk;
        }

        if (*verify) {
            check_band_limit(vopt.band_limit);
            vopt.only_group = verify_only;
            vopt.inject_fault = verify_fault;
            for (const std::string& kv : tol_kv) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos)
                    throw std::invalid_argument("--tol expects group=value");
                vopt.tol_overrides.emplace_back(kv.substr(0, eq), std::stod(kv.substr(eq + 1)));
            }
            ahq::VerifyReport rep = ahq::run_verify(vopt);
            std::cout << ahq::format_report(rep);
            return rep.all_passed() ? kExitOk : kExitFailure;
        }
    } catch (const ahq::NonzeroMomentum& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUndefined;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}
