#include <doctest.h>

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "cqmine/subprocess.hpp"

namespace fs = std::filesystem;
using namespace cqmine;

namespace {

const std::string kTool = CQMINE_TOOL_PATH;
const fs::path kDataDir = CQMINE_TEST_DATA_DIR;

struct ToolRun {
    int exit_code = -1;
    std::string output;
};

// Run the CLI with stderr folded into the captured stream.
ToolRun run_tool(const std::string& args) {
    const CommandResult result = run_command(kTool + " " + args + " 2>&1");
    ToolRun run;
    run.output = result.output;
    run.exit_code = WIFEXITED(result.status) ? WEXITSTATUS(result.status) : -1;
    return run;
}

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() /
               ("cqmine_cli_" + std::to_string(rd()) + "_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string str() const { return path.string(); }
};

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << content;
    REQUIRE(out.good());
}

// A two-commit repository with one C file, for wire-level mine/replicate runs.
std::string make_fixture_repo(const TempDir& dir, const std::string& name) {
    const fs::path repo = dir.path / name;
    fs::create_directories(repo);
    REQUIRE(run_command("git init -q " + shell_quote(repo.string())).ok());
    write_file(repo / "main.c", "int main(void) { return 0; }\n");
    std::string commit = "cd " + shell_quote(repo.string()) +
                         " && git add -A && GIT_AUTHOR_DATE='@1500000000 +0000'"
                         " GIT_COMMITTER_DATE='@1500000000 +0000'"
                         " git -c user.name=t -c user.email=t@example.com commit -qm one";
    REQUIRE(run_command(commit).ok());
    write_file(repo / "main.c", "int main(void) {\n    return 1;\n}\n");
    commit = "cd " + shell_quote(repo.string()) +
             " && git add -A && GIT_AUTHOR_DATE='@1500000100 +0000'"
             " GIT_COMMITTER_DATE='@1500000100 +0000'"
             " git -c user.name=t -c user.email=t@example.com commit -qm two";
    REQUIRE(run_command(commit).ok());
    return repo.string();
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text) {
        if (c == '\n') ++n;
    }
    return n;
}

int count_tabs_in_first_line(const std::string& text) {
    int n = 0;
    for (char c : text) {
        if (c == '\n') break;
        if (c == '\t') ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("cli help and version exit cleanly") {
    const auto help = run_tool("--help");
    CHECK(help.exit_code == 0);
    for (const char* name : {"measure", "mine", "rq1", "rq2", "plan", "replicate"}) {
        CAPTURE(name);
        CHECK(help.output.find(name) != std::string::npos);
    }

    const auto version = run_tool("--version");
    CHECK(version.exit_code == 0);
    CHECK(version.output.find("0.1.0") != std::string::npos);
}

TEST_CASE("cli usage errors exit with status 2") {
    const auto bare = run_tool("");
    CHECK(bare.exit_code == 2);
    CHECK(bare.output.find("error: usage:") != std::string::npos);

    const auto unknown = run_tool("measure --no-such-flag < /dev/null");
    CHECK(unknown.exit_code == 2);

    const auto bad_engagement = run_tool("plan --n 5 --engagement watchers");
    CHECK(bad_engagement.exit_code == 2);
    CHECK(bad_engagement.output.find("error: usage:") != std::string::npos);

    const auto mismatched =
        run_tool("plan --n 5 --strata 1 2 --counts 10");
    CHECK(mismatched.exit_code == 2);
    CHECK(mismatched.output.find("--counts") != std::string::npos);
}

TEST_CASE("measure reads stdin and writes one record") {
    const fs::path fixture = kDataDir / "golden" / "g01_empty.c";
    REQUIRE(fs::exists(fixture));
    const auto run = run_tool("measure < " + shell_quote(fixture.string()));
    CHECK(run.exit_code == 0);
    CHECK(count_lines(run.output) == 1);
    CHECK(count_tabs_in_first_line(run.output) == 60);  // 61 fields

    const auto with_header = run_tool("measure --header < " + shell_quote(fixture.string()));
    CHECK(with_header.exit_code == 0);
    CHECK(count_lines(with_header.output) == 2);
    CHECK(with_header.output.rfind("n_statements\t", 0) == 0);
}

TEST_CASE("rq1 reports missing timelines as a data error") {
    TempDir out;
    const auto run = run_tool("rq1 --timelines " +
                              shell_quote((out.path / "none.tsv").string()) + " --out " +
                              shell_quote(out.str()));
    CHECK(run.exit_code == 1);
    CHECK(run.output.find("error: data:") != std::string::npos);
    CHECK(run.output.find("no input timelines") != std::string::npos);
}

TEST_CASE("plan with explicit counts bypasses the catalog") {
    const auto run = run_tool("plan --n 10 --strata 4 --counts 51");
    CHECK(run.exit_code == 0);
    CHECK(run.output ==
          "stratum\trange_low\trange_high\tprojects\ttotal_engagements\tn_select\n"
          "4\t10001\t100000\t51\t2805000\t10\n");
}

TEST_CASE("plan options can come from a config file, flags taking precedence") {
    TempDir dir;
    const fs::path config = dir.path / "plan.ini";
    write_file(config, "[plan]\nn=3\nstrata=4\ncounts=51\n");

    const auto from_config = run_tool("--config " + shell_quote(config.string()) + " plan");
    CHECK(from_config.exit_code == 0);
    CHECK(from_config.output.find("\t3\n") != std::string::npos);

    const auto overridden =
        run_tool("--config " + shell_quote(config.string()) + " plan --n 7");
    CHECK(overridden.exit_code == 0);
    CHECK(overridden.output.find("\t7\n") != std::string::npos);
}

TEST_CASE("mine then rq1/rq2 runs end to end at the command level") {
    TempDir dir;
    const std::string repo = make_fixture_repo(dir, "demo");
    const fs::path out = dir.path / "mined";

    const auto mined = run_tool("mine --repo " + shell_quote(repo) + " --out " +
                                shell_quote(out.string()));
    CHECK(mined.exit_code == 0);
    CHECK(mined.output.find("mined 1 files, 2 records") != std::string::npos);
    REQUIRE(fs::exists(out / "demo.timeline.tsv"));
    REQUIRE(fs::exists(out / "demo.manifest.json"));

    const fs::path analysis = dir.path / "analysis";
    const auto rq1_run = run_tool("rq1 --timelines " + shell_quote(out.string()) +
                                  " --out " + shell_quote(analysis.string()) + " --svg");
    CHECK(rq1_run.exit_code == 0);
    REQUIRE(fs::exists(analysis / "rq1_acf.csv"));
    REQUIRE(fs::exists(analysis / "rq1_acf.svg"));
    std::ifstream csv(analysis / "rq1_acf.csv");
    std::string line;
    int rows = 0;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 1 + 11 * 50);

    const auto rq2_run = run_tool("rq2 --timelines " + shell_quote(out.string()) +
                                  " --out " + shell_quote(analysis.string()));
    CHECK(rq2_run.exit_code == 0);
    REQUIRE(fs::exists(analysis / "rq2_heatmap.csv"));
    std::ifstream heat(analysis / "rq2_heatmap.csv");
    rows = 0;
    while (std::getline(heat, line)) ++rows;
    CHECK(rows == 1 + 121);
}

TEST_CASE("replicate chains mining and both analyses") {
    TempDir dir;
    const std::string repo_a = make_fixture_repo(dir, "alpha");
    const std::string repo_b = make_fixture_repo(dir, "beta");
    const fs::path list = dir.path / "repos.txt";
    write_file(list, "# fixture repositories\n" + repo_a + "\n\n" + repo_b + "\n");
    const fs::path out = dir.path / "replication";

    const auto run = run_tool("replicate --repos " + shell_quote(list.string()) + " --out " +
                              shell_quote(out.string()));
    CHECK(run.exit_code == 0);
    for (const char* artifact : {"alpha.timeline.tsv", "beta.timeline.tsv",
                                 "alpha.manifest.json", "beta.manifest.json",
                                 "rq1_acf.csv", "rq2_heatmap.csv"}) {
        CAPTURE(artifact);
        CHECK(fs::exists(out / artifact));
    }

    const auto empty_list = run_tool("replicate --repos /dev/null --out " +
                                     shell_quote(out.string()));
    CHECK(empty_list.exit_code == 1);
    CHECK(empty_list.output.find("error: data:") != std::string::npos);
}
