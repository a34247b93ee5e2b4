// Acceptance gate: runs every library-level criterion, then exercises the
// installed CLI's verify subcommand end to end. Prints one line per
// criterion and exits nonzero on any failure.
#include "clusterdyn/verify.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <sys/wait.h>

namespace {

clusterdyn::CriterionResult cli_verify_criterion(int index) {
    namespace fs = std::filesystem;
    clusterdyn::CriterionResult r;
    r.index = index;
    r.name = "cli verify subcommand wall clock";

    std::error_code ec;
    fs::remove_all("acceptance_cli_verify", ec);
    const std::string cmd = std::string(CLUSTERDYN_CLI_PATH) +
                            " verify --out acceptance_cli_verify > acceptance_cli_verify.log 2>&1";

    const auto start = std::chrono::steady_clock::now();
    const int rc = std::system(cmd.c_str());
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const int code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    r.pass = code == 0 && r.seconds < 60.0;
    char buf[128];
    std::snprintf(buf, sizeof buf, "exit %d after %.1f s (budget 60 s)", code, r.seconds);
    r.detail = buf;
    return r;
}

} // namespace

int main() {
    std::vector<clusterdyn::CriterionResult> results = clusterdyn::run_acceptance();
    results.push_back(cli_verify_criterion(static_cast<int>(results.size()) + 1));
    clusterdyn::print_results(results, std::cout);
    return clusterdyn::all_passed(results) ? 0 : 1;
}
