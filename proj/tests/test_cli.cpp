#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ahq/ah_data.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

#ifndef AHQ_CLI_PATH
#error "AHQ_CLI_PATH must point at the built binary"
#endif

const std::string kCli = AHQ_CLI_PATH;

struct RunResult {
    int exit_code;
    std::string output;
};

RunResult run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " 2>&1";
    std::FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0)
        out.append(buf, n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("gen then compute: trivial datasets") {
    const std::string data = "/tmp/ahq_cli_mink.dat", rec = "/tmp/ahq_cli_mink.rec";

    SUBCASE("hyperboloid model gives the all-zero record") {
        CHECK(run("gen --kind minkowski_hyperboloid --band-limit 16 --output " + data).exit_code == 0);
        CHECK(run("validate --input " + data).exit_code == 0);
        CHECK(run("compute --input " + data + " --output " + rec).exit_code == 0);
        const std::string r = slurp(rec);
        CHECK(r.find("E 0\n") != std::string::npos);
        CHECK(r.find("M_rest undefined null_or_spacelike_momentum") != std::string::npos);
        CHECK(r.find("C1 0\n") != std::string::npos);
        const bool zero_rate = r.find("vacuum_loss_rate -0\n") != std::string::npos ||
                               r.find("vacuum_loss_rate 0\n") != std::string::npos;
        CHECK(zero_rate);
    }

    SUBCASE("constant aspect gives E = M_rest = m0") {
        CHECK(run("gen --kind schwarzschild_aspect --m0 1 --band-limit 16 --output " + data).exit_code == 0);
        CHECK(run("compute --input " + data + " --output " + rec).exit_code == 0);
        const std::string r = slurp(rec);
        CHECK(r.find("E 1\n") != std::string::npos);
        CHECK(r.find("M_rest 1\n") != std::string::npos);
        CHECK(r.find("J1 0\n") != std::string::npos);
    }

    std::remove(data.c_str());
    std::remove(rec.c_str());
}

TEST_CASE("determinism: identical configuration gives byte-identical output") {
    const std::string d1 = "/tmp/ahq_cli_det1.dat", d2 = "/tmp/ahq_cli_det2.dat";
    const std::string r1 = "/tmp/ahq_cli_det1.rec", r2 = "/tmp/ahq_cli_det2.rec";
    const std::string gen_args = "gen --kind random_bandlimited --seed 424242 --lmax 6 --band-limit 16 "
                                 "--zero-momentum --with-matter --output ";
    CHECK(run(gen_args + d1).exit_code == 0);
    CHECK(run(gen_args + d2).exit_code == 0);
    CHECK(slurp(d1) == slurp(d2));
    CHECK(run("compute --input " + d1 + " --output " + r1).exit_code == 0);
    CHECK(run("compute --input " + d2 + " --output " + r2).exit_code == 0);
    CHECK(slurp(r1) == slurp(r2));
    CHECK(slurp(r1).find("matter_loss_rate -") != std::string::npos);

    // a different seed must move the record
    CHECK(run("gen --kind random_bandlimited --seed 424243 --lmax 6 --band-limit 16 "
              "--zero-momentum --with-matter --output " +
              d2)
              .exit_code == 0);
    CHECK(run("compute --input " + d2 + " --output " + r2).exit_code == 0);
    CHECK(slurp(r1) != slurp(r2));

    for (const std::string& f : {d1, d2, r1, r2})
        std::remove(f.c_str());
}

TEST_CASE("exit-code contract") {
    const std::string data = "/tmp/ahq_cli_exit.dat";

    SUBCASE("missing input file exits 1") {
        CHECK(run("compute --input /tmp/ahq_cli_no_such_file.dat").exit_code == 1);
        CHECK(run("validate --input /tmp/ahq_cli_no_such_file.dat").exit_code == 1);
    }

    SUBCASE("malformed file exits 1 with a parse diagnostic") {
        std::ofstream out(data);
        out << "format_version 1\nband_limit 16\nnlat 17\nnlon 34\nfield bogus scalar\n";
        out.close();
        RunResult r = run("compute --input " + data);
        CHECK(r.exit_code == 1);
        CHECK(r.output.find("unknown field") != std::string::npos);
    }

    SUBCASE("nonzero momentum with --require-com exits 2") {
        CHECK(run("gen --kind random_bandlimited --seed 7 --lmax 4 --band-limit 16 --output " + data)
                  .exit_code == 0);
        CHECK(run("compute --input " + data + " --output /dev/null").exit_code == 0);
        RunResult r = run("compute --require-com --input " + data + " --output /dev/null");
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("undefined") != std::string::npos);
    }

    SUBCASE("zero-momentum data with --require-com exits 0") {
        CHECK(run("gen --kind random_bandlimited --seed 7 --lmax 4 --band-limit 16 --zero-momentum --output " +
                  data)
                  .exit_code == 0);
        CHECK(run("compute --require-com --input " + data + " --output /dev/null").exit_code == 0);
    }

    SUBCASE("bad band limit exits nonzero") {
        CHECK(run("gen --kind minkowski_hyperboloid --band-limit 4 --output " + data).exit_code != 0);
        CHECK(run("gen --kind minkowski_hyperboloid --band-limit 200 --output " + data).exit_code != 0);
    }

    SUBCASE("unknown kind exits 1") {
        CHECK(run("gen --kind nonsense --output " + data).exit_code == 1);
    }

    SUBCASE("usage errors exit 1, help exits 0") {
        CHECK(run("").exit_code == 1);
        CHECK(run("gen").exit_code == 1);
        CHECK(run("no-such-subcommand").exit_code == 1);
        CHECK(run("--help").exit_code == 0);
    }

    std::remove(data.c_str());
}

TEST_CASE("data file round trip through the CLI") {
    const std::string data = "/tmp/ahq_cli_rt.dat", copy = "/tmp/ahq_cli_rt2.dat";
    CHECK(run("gen --kind random_bandlimited --seed 5150 --lmax 8 --band-limit 16 --with-matter --output " +
              data)
              .exit_code == 0);
    ahq::AHExpansionData d = ahq::read_data(data);
    ahq::write_data(d, copy);
    CHECK(slurp(data) == slurp(copy));
    ahq::AHExpansionData d2 = ahq::read_data(copy);
    CHECK((d2.g_rr_m5 - d.g_rr_m5).max_abs() <= 1e-15);
    CHECK((d2.p_ab_m2.comp_tp() - d.p_ab_m2.comp_tp()).max_abs() <= 1e-15);
    std::remove(data.c_str());
    std::remove(copy.c_str());
}

TEST_CASE("boost scan emits the identity residual") {
    const std::string data = "/tmp/ahq_cli_boost.dat", csv = "/tmp/ahq_cli_boost.csv";
    CHECK(run("gen --kind schwarzschild_aspect --m0 2 --band-limit 16 --output " + data).exit_code == 0);
    CHECK(run("boost --input " + data + " --rapidity 0.1,0.5,1.0 --axis z --output " + csv).exit_code == 0);
    const std::string r = slurp(csv);
    CHECK(r.find("rapidity,axis,boost_energy,identity_residual") != std::string::npos);
    // E = 2 so the 0.5-rapidity row must read 2 cosh(0.5)
    CHECK(r.find("2.2552519304127614") != std::string::npos);
    std::remove(data.c_str());
    std::remove(csv.c_str());
}

TEST_CASE("embed writes the solved field and reports the obstruction") {
    const std::string data = "/tmp/ahq_cli_embed.dat", field = "/tmp/ahq_cli_embed.field";

    SUBCASE("zero momentum: solvable, field written") {
        CHECK(run("gen --kind random_bandlimited --seed 88 --lmax 6 --band-limit 16 --zero-momentum --output " +
                  data)
                  .exit_code == 0);
        RunResult r = run("embed --input " + data + " --output " + field);
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("solvable true") != std::string::npos);
        std::string name;
        ahq::ScalarField x0 = ahq::read_field(field, &name);
        CHECK(name == "X0_0");
        CHECK(x0.grid()->band_limit() == 16);
        CHECK(x0.all_finite());
    }

    SUBCASE("with momentum: not solvable") {
        CHECK(run("gen --kind random_bandlimited --seed 88 --lmax 6 --band-limit 16 --output " + data)
                  .exit_code == 0);
        RunResult r = run("embed --input " + data);
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("solvable false") != std::string::npos);
    }

    std::remove(data.c_str());
    std::remove(field.c_str());
}

TEST_CASE("extract emits a residual table and recovers h_m2") {
    const std::string data = "/tmp/ahq_cli_ex.dat", csv = "/tmp/ahq_cli_ex.csv";
    const std::string prefix = "/tmp/ahq_cli_ex_coef";
    CHECK(run("gen --kind random_bandlimited --seed 31459 --lmax 5 --amplitude 5e-4 --band-limit 16 --output " +
              data)
              .exit_code == 0);
    CHECK(run("extract --input " + data + " --radii 100,200,400,800 --output " + csv + " --coeff-prefix " +
              prefix)
              .exit_code == 0);
    CHECK(slurp(csv).find("radius,max_abs_residual,r4_weighted_residual") != std::string::npos);

    ahq::ScalarField h2 = ahq::read_field(prefix + "_h_m2.field");
    ahq::AHExpansionData d = ahq::read_data(data);
    ahq::ScalarField aspect = 1.5 * trace(d.g_ab_m1) + trace(d.p_ab_m1) + d.g_rr_m5;
    CHECK((h2 + aspect).max_abs() < 1e-6);

    SUBCASE("decreasing radii are refused") {
        CHECK(run("extract --input " + data + " --radii 400,200 --output /dev/null").exit_code != 0);
    }
    SUBCASE("radii below 10 are refused") {
        CHECK(run("extract --input " + data + " --radii 5,20,40,80 --output /dev/null").exit_code != 0);
    }

    std::remove(data.c_str());
    std::remove(csv.c_str());
    std::remove((prefix + "_h_m2.field").c_str());
    std::remove((prefix + "_h_m3.field").c_str());
}

TEST_CASE("verify subcommand") {
    SUBCASE("single group passes quickly") {
        RunResult r = run("verify --only angular-momentum --band-limit 16");
        CHECK(r.exit_code == 0);
        CHECK(r.output.find("ALL CHECKS PASSED") != std::string::npos);
    }

    SUBCASE("fault injection flips the loss-sign check to a failure") {
        RunResult r = run("verify --only loss-rate --band-limit 16 --inject-fault loss-sign");
        CHECK(r.exit_code == 1);
        CHECK(r.output.find("FAIL") != std::string::npos);
    }

    SUBCASE("unknown group is an error") {
        CHECK(run("verify --only no-such-group --band-limit 16").exit_code == 1);
    }

    SUBCASE("tolerance overrides are honored") {
        // an absurdly tight tolerance forces a failure
        RunResult r = run("verify --only transforms --band-limit 16 --tol transforms=1e-30");
        CHECK(r.exit_code == 1);
    }
}
