// Copyright 2026 The radpair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Runs the radpair executable in a scratch directory and collects its output.

#ifndef RADPAIR_TESTS_CLI_HARNESS_HPP
#define RADPAIR_TESTS_CLI_HARNESS_HPP

#include <sys/wait.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

namespace radpair::testing {

namespace fs = std::filesystem;

inline std::string read_bytes(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

struct CliRun {
    int exit_code = -1;
    std::string out;
    std::string err;
    fs::path dir;  // working directory of the run
};

/// A fresh empty directory under the system temp dir.
inline fs::path scratch_dir(const std::string& tag) {
    static std::atomic<int> counter{0};
    fs::path d = fs::temp_directory_path() /
                 ("radpair-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

inline std::string shell_quote(const std::string& s) {
    std::string q = "'";
    for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return q + "'";
}

/// `args` is appended verbatim after the executable path.
inline CliRun run_cli(const std::string& exe, const std::string& args, const std::string& tag) {
    CliRun r;
    r.dir = scratch_dir(tag);
    const std::string cmd = "cd " + shell_quote(r.dir.string()) + " && " + shell_quote(exe) + " " + args +
                            " >stdout.txt 2>stderr.txt";
    const int status = std::system(cmd.c_str());
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = read_bytes(r.dir / "stdout.txt");
    r.err = read_bytes(r.dir / "stderr.txt");
    return r;
}

}  // namespace radpair::testing

#endif  // RADPAIR_TESTS_CLI_HARNESS_HPP
