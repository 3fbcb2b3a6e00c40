// Sandboxed candidate execution. Each candidate runs in a private temp
// directory, one child process per test case, with the case input on stdin
// and stdout captured to a file. Wall-clock and memory ceilings are enforced
// per case; breaches are killed and classified, never silently conflated
// with ordinary wrong-answer failures.

#pragma once

#include <fcntl.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/stat.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "passk/corpus.hpp"
#include "passk/errors.hpp"
#include "passk/solution.hpp"

namespace passk {

enum class Outcome { pass, fail, timeout, memory_exceeded, runtime_error, extraction_error };

inline const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::pass: return "pass";
        case Outcome::fail: return "fail";
        case Outcome::timeout: return "timeout";
        case Outcome::memory_exceeded: return "memory_exceeded";
        case Outcome::runtime_error: return "runtime_error";
        default: return "extraction_error";
    }
}

inline Outcome outcome_from_string(const std::string& name) {
    for (Outcome o : {Outcome::pass, Outcome::fail, Outcome::timeout, Outcome::memory_exceeded,
                      Outcome::runtime_error, Outcome::extraction_error}) {
        if (name == to_string(o)) return o;
    }
    throw config_error("unknown outcome name: " + name);
}

struct Verdict {
    Outcome outcome = Outcome::fail;
    std::vector<Outcome> per_case;
    double wall_time = 0.0;  // seconds, summed over executed cases
};

struct SandboxLimits {
    std::vector<std::string> interpreter{"python3"};  // argv prefix; program path appended
    double time_per_case = 2.0;                       // wall seconds
    std::uint64_t memory_bytes = 256ull << 20;
    bool run_all_cases = false;  // default stops at the first failing case
};

inline int success_indicator(const Verdict& v) {
    return v.outcome == Outcome::pass ? 1 : 0;
}

// Strips trailing whitespace from each line and drops trailing blank lines;
// the remaining lines must match exactly.
inline bool outputs_match(std::string_view actual, std::string_view expected) {
    auto normalize = [](std::string_view text) {
        std::vector<std::string> lines;
        std::size_t start = 0;
        while (start <= text.size()) {
            auto nl = text.find('\n', start);
            std::string_view line = text.substr(
                start, nl == std::string_view::npos ? text.size() - start : nl - start);
            while (!line.empty() &&
                   (line.back() == ' ' || line.back() == '\t' || line.back() == '\r')) {
                line.remove_suffix(1);
            }
            lines.emplace_back(line);
            if (nl == std::string_view::npos) break;
            start = nl + 1;
        }
        while (!lines.empty() && lines.back().empty()) lines.pop_back();
        return lines;
    };
    return normalize(actual) == normalize(expected);
}

namespace detail {

class SandboxDir {
  public:
    SandboxDir() {
        std::string tmpl =
            (std::filesystem::temp_directory_path() / "passk-sandbox-XXXXXX").string();
        std::vector<char> buf(tmpl.begin(), tmpl.end());
        buf.push_back('\0');
        if (!mkdtemp(buf.data())) {
            throw infrastructure_error(std::string("cannot create sandbox directory: ") +
                                       std::strerror(errno));
        }
        path_ = buf.data();
    }
    ~SandboxDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    SandboxDir(const SandboxDir&) = delete;
    SandboxDir& operator=(const SandboxDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, std::string_view content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw infrastructure_error("cannot write sandbox file " + p.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct CaseRun {
    Outcome outcome = Outcome::fail;
    double wall_seconds = 0.0;
};

// Runs one test case in a fresh child process group. The child gets the
// address-space limit plus a fixed headroom for the interpreter runtime; the
// parent enforces the wall clock and kills the whole group on breach.
inline CaseRun run_one_case(const std::filesystem::path& sandbox,
                            const std::vector<std::string>& argv_prefix,
                            const std::filesystem::path& program,
                            const TestCase& test_case, const SandboxLimits& limits,
                            int case_index) {
    const auto stdin_path = sandbox / ("case" + std::to_string(case_index) + ".in");
    const auto stdout_path = sandbox / ("case" + std::to_string(case_index) + ".out");
    const auto stderr_path = sandbox / ("case" + std::to_string(case_index) + ".err");
    write_file(stdin_path, test_case.input);

    // exec-failure reporting channel; O_CLOEXEC makes a successful exec
    // close it, so a read of zero bytes means the program launched.
    int exec_pipe[2];
    if (pipe2(exec_pipe, O_CLOEXEC) != 0) {
        throw infrastructure_error(std::string("pipe2 failed: ") + std::strerror(errno));
    }

    std::vector<std::string> argv_store = argv_prefix;
    argv_store.push_back(program.string());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    argv.push_back(nullptr);

    const auto start = std::chrono::steady_clock::now();
    pid_t pid = fork();
    if (pid < 0) {
        close(exec_pipe[0]);
        close(exec_pipe[1]);
        throw infrastructure_error(std::string("fork failed: ") + std::strerror(errno));
    }

    if (pid == 0) {
        close(exec_pipe[0]);
        setpgid(0, 0);
        if (chdir(sandbox.c_str()) != 0) _exit(125);

        int in_fd = open(stdin_path.c_str(), O_RDONLY);
        int out_fd = open(stdout_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
        int err_fd = open(stderr_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
        if (in_fd < 0 || out_fd < 0 || err_fd < 0) _exit(125);
        dup2(in_fd, STDIN_FILENO);
        dup2(out_fd, STDOUT_FILENO);
        dup2(err_fd, STDERR_FILENO);
        close(in_fd);
        close(out_fd);
        close(err_fd);

        // Address space: candidate budget plus interpreter headroom. CPU: a
        // backstop one second past the wall budget, in case the parent dies.
        rlimit as_limit{};
        as_limit.rlim_cur = as_limit.rlim_max = limits.memory_bytes + (64ull << 20);
        setrlimit(RLIMIT_AS, &as_limit);
        rlimit cpu_limit{};
        auto cpu_sec = static_cast<rlim_t>(limits.time_per_case) + 1;
        cpu_limit.rlim_cur = cpu_sec;
        cpu_limit.rlim_max = cpu_sec + 1;
        setrlimit(RLIMIT_CPU, &cpu_limit);
        rlimit core_limit{};
        core_limit.rlim_cur = core_limit.rlim_max = 0;
        setrlimit(RLIMIT_CORE, &core_limit);

        execvp(argv[0], argv.data());
        int err = errno;
        ssize_t ignored = write(exec_pipe[1], &err, sizeof(err));
        (void)ignored;
        _exit(127);
    }

    close(exec_pipe[1]);
    setpgid(pid, pid);  // also from the parent side, to close the race

    bool killed_for_time = false;
    int status = 0;
    rusage usage{};
    const auto deadline =
        start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(limits.time_per_case));
    for (;;) {
        pid_t done = wait4(pid, &status, WNOHANG, &usage);
        if (done == pid) break;
        if (done < 0 && errno != EINTR) {
            close(exec_pipe[0]);
            throw infrastructure_error(std::string("wait4 failed: ") + std::strerror(errno));
        }
        if (!killed_for_time && std::chrono::steady_clock::now() >= deadline) {
            kill(-pid, SIGKILL);
            kill(pid, SIGKILL);
            killed_for_time = true;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    int exec_errno = 0;
    ssize_t got = read(exec_pipe[0], &exec_errno, sizeof(exec_errno));
    close(exec_pipe[0]);
    if (got == sizeof(exec_errno)) {
        throw infrastructure_error("cannot launch interpreter '" + argv_store[0] +
                                   "': " + std::strerror(exec_errno));
    }

    CaseRun result;
    result.wall_seconds = wall;

    const std::uint64_t max_rss_bytes = static_cast<std::uint64_t>(usage.ru_maxrss) * 1024;
    if (killed_for_time) {
        result.outcome = Outcome::timeout;
    } else if (WIFSIGNALED(status) && (WTERMSIG(status) == SIGXCPU)) {
        result.outcome = Outcome::timeout;
    } else if (max_rss_bytes >= limits.memory_bytes) {
        result.outcome = Outcome::memory_exceeded;
    } else if (WIFSIGNALED(status)) {
        result.outcome = Outcome::runtime_error;
    } else if (WIFEXITED(status) && WEXITSTATUS(status) == 125) {
        throw infrastructure_error("sandbox setup failed inside the child process");
    } else if (WIFEXITED(status) && WEXITSTATUS(status) != 0) {
        result.outcome = Outcome::runtime_error;
    } else {
        result.outcome = outputs_match(read_file(stdout_path), test_case.expected_output)
                             ? Outcome::pass
                             : Outcome::fail;
    }
    return result;
}

}  // namespace detail

// Runs the candidate against every case (stopping at the first failure
// unless run_all_cases is set) and aggregates: the overall outcome is pass
// exactly when every case passed; otherwise the first non-pass outcome.
inline Verdict run_candidate(const CandidateSolution& candidate, const TestSuite& suite,
                             const SandboxLimits& limits = {}) {
    Verdict verdict;
    if (!candidate.extraction_ok) {
        verdict.outcome = Outcome::extraction_error;
        return verdict;
    }
    if (suite.cases.empty()) {
        throw domain_error("test suite must contain at least one case");
    }
    if (limits.interpreter.empty()) {
        throw config_error("sandbox interpreter command must be non-empty");
    }

    detail::SandboxDir sandbox;
    const auto program_path = sandbox.path() / "program";
    detail::write_file(program_path, candidate.program);

    verdict.outcome = Outcome::pass;
    for (std::size_t i = 0; i < suite.cases.size(); ++i) {
        auto run = detail::run_one_case(sandbox.path(), limits.interpreter, program_path,
                                        suite.cases[i], limits, static_cast<int>(i));
        verdict.per_case.push_back(run.outcome);
        verdict.wall_time += run.wall_seconds;
        if (run.outcome != Outcome::pass && verdict.outcome == Outcome::pass) {
            verdict.outcome = run.outcome;
            if (!limits.run_all_cases) break;
        }
    }
    return verdict;
}

}  // namespace passk
