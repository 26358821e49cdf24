// Report orchestration: CSV schemas, the rows = locations x engines x
// thresholds accounting, cross-engine consistency, exit codes, and atomic
// output files.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "attocell/config.hpp"
#include "attocell/report.hpp"

using namespace attocell;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& csv) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) fields.push_back(cell);
        if (!line.empty() && line.back() == ',') fields.emplace_back();
        rows.push_back(std::move(fields));
    }
    return rows;
}

double num(const std::string& s) { return std::stod(s); }

const char* kCoverageHeader = "location_name,y1,y2,threshold,engine,value,ci_halfwidth,K,eta";

}  // namespace

TEST_CASE("coverage report: schema, row accounting, agreement, determinism") {
    // Four fixed locations x 8 thresholds x both engines -> 64 data rows.
    const std::string text =
        "k = 0\n"
        "trials = 5000\n"
        "tau_db = 0, 1, 2, 3, 4, 5, 6, 7\n"
        "locations = corner, edge, halfway, center\n"
        "abs_tol = 0.02\n"
        "rel_tol = 1e-4\n";
    const ExperimentConfig cfg = parse_config(text);
    const RunResult res = run_coverage(cfg);
    CHECK(res.exit_code == 0);

    const auto rows = parse_csv(res.csv);
    REQUIRE(rows.size() == 65);
    REQUIRE(rows[0].size() == 9);
    {
        std::string header;
        for (std::size_t i = 0; i < rows[0].size(); ++i)
            header += (i ? "," : "") + rows[0][i];
        CHECK(header == kCoverageHeader);
    }
    CHECK(res.csv.find("\r") == std::string::npos);  // LF line endings only

    const std::vector<double> taus = cfg.effective_tau_grid();
    const std::vector<std::string> names{"corner", "edge", "halfway", "center"};
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& f = rows[r];
        REQUIRE(f.size() == 9);
        const std::size_t loc = (r - 1) / 16;       // 16 rows per location block
        const std::size_t within = (r - 1) % 16;    // analytic rows first
        CHECK(f[0] == names[loc]);
        CHECK(f[4] == (within < 8 ? "analytic" : "mc"));
        CHECK(num(f[3]) == doctest::Approx(taus[within % 8]).epsilon(1e-9));
        CHECK(num(f[5]) >= 0.0);
        CHECK(num(f[5]) <= 1.0);
        CHECK(num(f[6]) >= 0.0);
        CHECK(f[7] == "0");
        CHECK(num(f[8]) == 0.07);
    }
    // Named coordinates ride along on every row.
    CHECK(num(rows[1][1]) == 9.0);
    CHECK(num(rows[1][2]) == 9.0);
    CHECK(num(rows[17][2]) == 0.0);  // edge: (a, 0)

    // The two engines tell the same story at every point.
    for (std::size_t r = 1; r <= 64; ++r) {
        if (rows[r][4] != "analytic") continue;
        const auto& mc = rows[r + 8];
        REQUIRE(mc[4] == "mc");
        const double tol = 0.025 + 3.0 * num(mc[6]) + num(rows[r][6]);
        CHECK(std::fabs(num(rows[r][5]) - num(mc[5])) <= tol);
    }

    // Same configuration, same seed, same bytes.
    CHECK(run_coverage(cfg).csv == res.csv);

    // Engine selection scales the row count.
    ExperimentConfig one = cfg;
    one.engine = Engine::MC;
    CHECK(parse_csv(run_coverage(one).csv).size() == 33);

    // The averaged receiver gets empty coordinate columns.
    const ExperimentConfig typ =
        parse_config("engine = mc\ntrials = 2000\ntau_db = 0, 3\nlocations = typical\n");
    const auto trows = parse_csv(run_coverage(typ).csv);
    REQUIRE(trows.size() == 3);
    CHECK(trows[1][0] == "typical");
    CHECK(trows[1][1].empty());
    CHECK(trows[1][2].empty());

    // Sub-unity thresholds only make sense for the sampling engine; the
    // orchestrator refuses them before doing any work when analytic rows were
    // requested (reachable only on hand-built configs; the parser also rejects).
    ExperimentConfig bad = cfg;
    bad.tau_grid = std::vector<double>{0.5};
    const RunResult refused = run_coverage(bad);
    CHECK(refused.exit_code == 1);
    CHECK(refused.csv.empty());
    CHECK(refused.message.find("below one") != std::string::npos);
}

TEST_CASE("rate report: engine rows, median summaries, and the K-drop row") {
    const std::string text =
        "k = 1\n"
        "trials = 20000\n"
        "rho = 2e8, 5e8\n"
        "locations = center\n";
    const ExperimentConfig cfg = parse_config(text);
    const RunResult res = run_rate(cfg);
    CHECK(res.exit_code == 0);

    const auto rows = parse_csv(res.csv);
    REQUIRE(rows.size() == 7);  // header + 2 analytic + 2 mc + median + drop
    CHECK(rows[1][4] == "analytic");
    CHECK(rows[2][4] == "analytic");
    CHECK(rows[3][4] == "mc");
    CHECK(rows[4][4] == "mc");
    CHECK(rows[5][4] == "mc_median");
    CHECK(rows[6][4] == "mc_median_drop");

    CHECK(num(rows[1][3]) == 2e8);
    CHECK(num(rows[2][3]) == 5e8);
    for (int r : {1, 2, 3, 4}) {
        CHECK(num(rows[r][5]) >= 0.0);
        CHECK(num(rows[r][5]) <= 1.0);
    }
    // Rate coverage falls with the target rate, on both engines.
    CHECK(num(rows[1][5]) > num(rows[2][5]));
    CHECK(num(rows[3][5]) > num(rows[4][5]));
    for (int r : {1, 2}) {
        const auto& mc = rows[r + 2];
        const double tol = 0.02 + 3.0 * num(mc[6]) + num(rows[r][6]);
        CHECK(std::fabs(num(rows[r][5]) - num(mc[5])) <= tol);
    }

    // The median row reports a rate in bits/s (threshold column = quantile);
    // with reflections on, the drop row compares against a zero-reflection
    // run of the same seed.
    CHECK(num(rows[5][3]) == 0.5);
    CHECK(num(rows[5][5]) > 1e7);
    CHECK(num(rows[5][6]) == 0.0);
    CHECK(num(rows[6][3]) == 0.5);
    CHECK(num(rows[6][5]) > -1.0);
    CHECK(num(rows[6][5]) < 1.0);
    CHECK(rows[6][7] == "1");

    CHECK(run_rate(cfg).csv == res.csv);

    // Without reflections there is nothing to compare against: no drop row.
    const ExperimentConfig flat =
        parse_config("k = 0\ntrials = 5000\nrho = 2e8\nlocations = center\nengine = mc\n");
    const auto frows = parse_csv(run_rate(flat).csv);
    REQUIRE(frows.size() == 3);  // header + mc + median
    CHECK(frows[2][4] == "mc_median");

    // A rate target that maps below the analytic engine's threshold floor is
    // refused up front (the sampling engine accepts it).
    ExperimentConfig low = cfg;
    low.rho_grid = std::vector<double>{5e7};
    const RunResult refused = run_rate(low);
    CHECK(refused.exit_code == 1);
    CHECK(refused.message.find("below one") != std::string::npos);
    low.engine = Engine::MC;
    CHECK(run_rate(low).exit_code == 0);
}

TEST_CASE("validate report passes on a consistent deployment") {
    const std::string text =
        "a = 4.5\n"
        "k = 0\n"
        "trials = 10000\n"
        "corollary_taus = 2\n"
        "locations = corner, center, typical\n";
    const ExperimentConfig cfg = parse_config(text);
    const RunResult res = run_validate(cfg);
    CHECK(res.exit_code == 0);
    CHECK(res.message.find("15/15") != std::string::npos);

    const auto rows = parse_csv(res.csv);
    REQUIRE(rows.size() == 16);
    CHECK(rows[0][0] == "check");
    CHECK(rows[0][7] == "status");
    int corollary_rows = 0, coverage_rows = 0, envelope_rows = 0;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        REQUIRE(rows[r].size() == 8);
        CHECK(rows[r][7] == "pass");
        CHECK(num(rows[r][5]) <= num(rows[r][6]));  // delta within tolerance
        if (rows[r][0].rfind("corollary", 0) == 0) {
            ++corollary_rows;
            CHECK(num(rows[r][6]) == 1e-3);
        } else if (rows[r][0] == "coverage") {
            ++coverage_rows;
        } else {
            CHECK(rows[r][0] == "envelope");
            ++envelope_rows;
        }
    }
    CHECK(corollary_rows == 3);  // three identities at one threshold each
    CHECK(coverage_rows == 8);   // two fixed locations x four thresholds
    CHECK(envelope_rows == 4);   // averaged receiver vs the location span
}

TEST_CASE("validate report flags an averaged receiver outside the span") {
    // With only the room center as a reference point, the room-averaged
    // coverage sits far above the center's curve at low thresholds: the
    // envelope check must fail and drive exit code 3.
    ExperimentConfig cfg =
        parse_config("a = 4.5\ntrials = 5000\nlocations = center, typical\n");
    cfg.corollary_taus.clear();
    const RunResult res = run_validate(cfg);
    CHECK(res.exit_code == 3);

    const auto rows = parse_csv(res.csv);
    bool saw_fail = false;
    for (std::size_t r = 1; r < rows.size(); ++r)
        if (rows[r][0] == "envelope" && rows[r][7] == "fail") saw_fail = true;
    CHECK(saw_fail);
    CHECK(res.message.find("/8 checks passed") != std::string::npos);
}

TEST_CASE("interference report brackets the sampled median, both engines agree") {
    const ExperimentConfig cfg =
        parse_config("k = 1\ntrials = 20000\nlocations = center\n");
    const RunResult res = run_interference(cfg);
    CHECK(res.exit_code == 0);

    const auto rows = parse_csv(res.csv);
    REQUIRE(rows.size() == 11);  // header + 10 abscissae
    CHECK(rows[0][3] == "s");
    for (std::size_t r = 1; r < rows.size(); ++r) {
        REQUIRE(rows[r].size() == 11);
        CHECK(rows[r][10] == "pass");
        CHECK(num(rows[r][8]) <= num(rows[r][9]));
        if (r > 1) CHECK(num(rows[r][3]) > num(rows[r - 1][3]));
    }
    // The grid spans a factor-4 bracket around the sampled median, so the CDF
    // crosses one half inside it.
    CHECK(num(rows[10][3]) / num(rows[1][3]) == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(num(rows[1][6]) < 0.5);
    CHECK(num(rows[10][6]) > 0.5);

    CHECK(run_interference(cfg).csv == res.csv);

    // The averaged receiver has no single distribution: nothing to compare.
    const ExperimentConfig typ = parse_config("trials = 2000\nlocations = typical\n");
    const RunResult skip = run_interference(typ);
    CHECK(skip.exit_code == 0);
    CHECK(parse_csv(skip.csv).size() == 1);
}

TEST_CASE("atomic writes land complete files and replace targets") {
    const std::string path = "report_atomic_test.csv";
    write_atomic(path, "first,line\n1,2\n");
    {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        CHECK(buf.str() == "first,line\n1,2\n");
    }
    write_atomic(path, "replaced\n");
    {
        std::ifstream in(path, std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        CHECK(buf.str() == "replaced\n");
    }
    // No temp-file debris next to the target.
    CHECK(!std::ifstream(path + ".tmp").good());
    std::remove(path.c_str());

    CHECK_THROWS_AS(write_atomic("no_such_dir_here/out.csv", "x\n"),
                    std::runtime_error);
}
