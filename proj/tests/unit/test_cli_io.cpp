#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "nematic/config.hpp"
#include "nematic/csv.hpp"
#include "nematic/snapshot.hpp"
#include "nematic/verify.hpp"
#include "support.hpp"

using namespace nematic;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nematic_tests_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(NEMATIC2D_EXE) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_SUITE("cli_io") {
  TEST_CASE("config defaults") {
    const RunConfig c = parse_config("");
    CHECK(c.params.nu == 1.0);
    CHECK(c.params.lambda == 1.0);
    CHECK(c.params.gamma == 1.0);
    CHECK(c.params.L == 0.1);
    CHECK(c.params.a == -1.0);
    CHECK(c.params.c == 1.0);
    CHECK(c.params.xi == 0.5);
    CHECK(c.grid_n == 128);
    CHECK(c.stepper.dt == 1e-3);
    CHECK(c.stepper.t_end == 1.0);
    CHECK(c.stepper.scheme == stepper::Scheme::ars222);
    CHECK(validate(c).empty());
  }

  TEST_CASE("config parsing and validation") {
    const RunConfig c = parse_config("# comment\n nu = 0.5\nxi=-2 # trailing\n grid_n = 10\nscheme = euler\n"
                                     "velocity_ic = taylor_green\nadaptive = true\n");
    CHECK(c.params.nu == 0.5);
    CHECK(c.params.xi == -2.0);
    CHECK(c.grid_n == 10);
    CHECK(c.stepper.scheme == stepper::Scheme::euler);
    CHECK(c.initial.velocity == VelocityInit::taylor_green);
    CHECK(c.stepper.adaptive);

    try {
      parse_config("c = -1\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      REQUIRE(e.problems().size() == 1);
      CHECK(e.problems()[0].find("c") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("grid_n = 7\n"), ConfigError);
    try {
      parse_config("bogus = 1\nnu = abc\ngrid_n = 6\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.problems().size() == 3);
    }
    CHECK_THROWS_AS(parse_config("nu = 1\nnu = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("just text\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("scheme = rk4\n"), ConfigError);

    RunConfig s = parse_config("");
    apply_seed(s, 41);
    CHECK(s.initial.velocity_seed == 41);
    CHECK(s.initial.q_seed == 42);
  }

  TEST_CASE("snapshot round trip") {
    const Grid g(16);
    SimState s(0.1 + 0.2, test::trig_velocity(g, 1, 4), test::trig_q(g, 2, 4, 0.7, 0.1));
    s.Q.p[7] = -0.0;
    s.u.u1[3] = std::numeric_limits<double>::denorm_min();
    const std::string bytes = snapshot::encode(s);
    CHECK(bytes.size() == snapshot::kHeaderBytes + 4 * 256 * sizeof(double));
    CHECK(bytes.substr(0, 7) == "BEQT2D\n");
    CHECK(bytes[63] == '\n');
    const SimState r = snapshot::decode(bytes);
    CHECK(r == s);
    CHECK(r.t == s.t);
    CHECK(std::signbit(r.Q.p[7]));

    CHECK_THROWS_AS(snapshot::decode(bytes.substr(0, bytes.size() - 8)), snapshot::SnapshotError);
    CHECK_THROWS_AS(snapshot::decode(bytes.substr(0, 40)), snapshot::SnapshotError);
    std::string bad = bytes;
    bad[0] = 'X';
    CHECK_THROWS_AS(snapshot::decode(bad), snapshot::SnapshotError);
    CHECK_THROWS_AS(snapshot::decode(bytes, Grid(32)), snapshot::SnapshotError);
    CHECK_NOTHROW(snapshot::decode(bytes, Grid(16)));

    const fs::path dir = scratch("snap");
    snapshot::write_snapshot((dir / "s.bin").string(), s);
    CHECK(snapshot::read_snapshot((dir / "s.bin").string()) == s);
    CHECK_THROWS_AS(snapshot::read_snapshot((dir / "missing.bin").string()), snapshot::SnapshotError);
  }

  TEST_CASE("CSV format") {
    CHECK(csv::header_line() ==
          "t,E_total,E_kinetic,E_elastic,E_bulk,grad_u_L2sq,H_L2sq,A,B,div_u_max,Q_Linf,u_H1,Q_minus_Qinf_H2,"
          "energy_residual");
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-10, 10);
    for (int k = 0; k < 1000; ++k) {
      const double v = std::ldexp(U(rng), static_cast<int>(U(rng) * 30));
      CHECK(std::stod(csv::format_double(v)) == v);
    }
    CHECK(csv::format_double(std::nan("")) == "nan");
    CHECK(csv::format_double(0.1) == "0.1");

    std::vector<DiagnosticsRow> rows(3);
    for (int k = 0; k < 3; ++k) {
      rows[k].t = 0.1 * k;
      rows[k].E_total = std::exp(-k) / 3.0;
      rows[k].A = 1e-300 * (k + 1);
      if (k > 0) rows[k].energy_residual = -1.0 / 7.0;
    }
    const fs::path dir = scratch("csv");
    {
      csv::DiagnosticsWriter w((dir / "d.csv").string());
      for (const auto& r : rows) w.write(r);
      CHECK(w.rows() == 3);
    }
    const auto back = csv::read_diagnostics((dir / "d.csv").string());
    REQUIRE(back.size() == 3);
    for (int k = 0; k < 3; ++k) {
      const auto a = rows[k].values(), b = back[k].values();
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(((std::isnan(a[i]) && std::isnan(b[i])) || a[i] == b[i]));
    }
    CHECK_THROWS_AS(csv::parse_diagnostics("t,E\n1,2\n"), csv::CsvError);
    CHECK_THROWS_AS(csv::parse_diagnostics(csv::header_line() + "\n1,2\n"), csv::CsvError);
  }

  TEST_CASE("suite report serializes to JSON") {
    verify::Report r;
    r.checks.push_back({"a", true, {{"x", 1.5}}, ""});
    r.checks.push_back({"b", false, {{"y", std::nan("")}}, "why"});
    CHECK_FALSE(r.passed());
    const std::string j = r.to_json();
    CHECK(j.find("\"a\"") != std::string::npos);
    CHECK(j.find("why") != std::string::npos);
  }
}

TEST_SUITE("cli") {
  TEST_CASE("quiescent equilibrium stops after one row") {
    const fs::path dir = scratch("cli_eq");
    write_text(dir / "c.conf", "grid_n = 16\nvelocity_ic = quiescent\nq_ic = constant_q\nq_p = 0.5\nq_q = 0.5\n");
    CHECK(run_cli("simulate --config " + (dir / "c.conf").string() + " --output " + dir.string(), dir / "log") == 0);
    const auto rows = csv::read_diagnostics((dir / "diagnostics.csv").string());
    CHECK(rows.size() == 1);
    CHECK(fs::exists(dir / "final.bin"));
  }

  TEST_CASE("default data dissipate energy") {
    const fs::path dir = scratch("cli_run");
    write_text(dir / "c.conf", "grid_n = 32\nt_end = 0.2\ndiagnostics_every = 5\nsnapshot_every = 50\n");
    CHECK(run_cli("simulate --config " + (dir / "c.conf").string() + " --output " + dir.string(), dir / "log") == 0);
    const auto rows = csv::read_diagnostics((dir / "diagnostics.csv").string());
    CHECK(rows.size() == 41);
    for (std::size_t k = 1; k < rows.size(); ++k)
      CHECK(rows[k].E_total <= rows[k - 1].E_total + 1e-8 * (1.0 + std::abs(rows[k - 1].E_total)));
    CHECK(fs::exists(dir / "snap_00000000.bin"));
    CHECK(fs::exists(dir / "snap_00000200.bin"));

    // Same config twice: identical bytes.
    const fs::path again = scratch("cli_run2");
    CHECK(run_cli("simulate --config " + (dir / "c.conf").string() + " --output " + again.string(), again / "log") == 0);
    CHECK(slurp(dir / "diagnostics.csv") == slurp(again / "diagnostics.csv"));
    CHECK(slurp(dir / "final.bin") == slurp(again / "final.bin"));

    CHECK(run_cli("director --snapshot " + (dir / "final.bin").string() + " --output " + (dir / "d.csv").string(),
                  dir / "log2") == 0);
    const std::string d = slurp(dir / "d.csv");
    CHECK(d.rfind("i,j,p,q,s,theta\n", 0) == 0);
    CHECK(std::count(d.begin(), d.end(), '\n') == 1 + 32 * 32);
  }

  TEST_CASE("blow-up writes a checkpoint") {
    const fs::path dir = scratch("cli_blow");
    write_text(dir / "c.conf",
               "grid_n = 16\ndt = 100\nt_end = 100000\nvelocity_amplitude = 1000\nlambda = 50\nxi = 5\n");
    CHECK(run_cli("simulate --config " + (dir / "c.conf").string() + " --output " + dir.string(), dir / "log") == 3);
    CHECK(fs::exists(dir / "checkpoint.bin"));
    CHECK(snapshot::read_snapshot((dir / "checkpoint.bin").string()).u.u1.all_finite());
  }

  TEST_CASE("invalid config is reported") {
    const fs::path dir = scratch("cli_bad");
    write_text(dir / "c.conf", "c = -1\n");
    CHECK(run_cli("simulate --config " + (dir / "c.conf").string() + " --output " + dir.string(), dir / "log") == 1);
    CHECK(slurp(dir / "log").find("c") != std::string::npos);
  }

  TEST_CASE("relax then rate") {
    const fs::path dir = scratch("cli_rate");
    write_text(dir / "c.conf", "grid_n = 32\nrelax_tol = 1e-9\n");
    CHECK(run_cli("relax --config " + (dir / "c.conf").string() + " --output " + dir.string(), dir / "log") == 0);
    CHECK(fs::exists(dir / "qinf.bin"));
    CHECK(fs::exists(dir / "relax.json"));

    // Synthetic CSV decaying like (1 + t)^-1 in the norm.
    {
      csv::DiagnosticsWriter w((dir / "syn.csv").string());
      for (int k = 0; k < 100; ++k) {
        DiagnosticsRow r;
        r.t = 0.5 * k;
        r.A = std::pow(1.0 + r.t, -2.0);
        r.Q_minus_Qinf_H2 = 1.0 / (1.0 + r.t);
        w.write(r);
      }
    }
    CHECK(run_cli("rate --csv " + (dir / "syn.csv").string() + " --qinf " + (dir / "qinf.bin").string(), dir / "log2") == 0);
    const std::string rep = slurp(dir / "rate_report.json");
    CHECK(rep.find("theta_hat") != std::string::npos);
    CHECK(rep.find("0.333") != std::string::npos);
  }

  TEST_CASE("verify passes and detects a broken stress sign") {
    const fs::path dir = scratch("cli_verify");
    write_text(dir / "ok.conf", "verify_grid_n = 32\n");
    CHECK(run_cli("verify --config " + (dir / "ok.conf").string() + " --output " + dir.string(), dir / "log") == 0);
    CHECK(fs::exists(dir / "verify_report.json"));

    const fs::path bad = scratch("cli_verify_bad");
    write_text(bad / "bad.conf", "verify_grid_n = 32\nflip_tau_sign = true\n");
    CHECK(run_cli("verify --config " + (bad / "bad.conf").string() + " --output " + bad.string(), bad / "log") == 1);
    const std::string log = slurp(bad / "log");
    CHECK(log.find("FAIL identity") != std::string::npos);
    CHECK(log.find("FAIL energy_law") != std::string::npos);
  }
}
