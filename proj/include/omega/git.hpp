#pragma once

#include <optional>
#include <string>
#include <vector>

// Read-only git access through the `git` executable.
namespace omega::git {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

/// Runs `git <args>` without a shell. Throws omega::Error if git cannot be started.
RunResult run(const std::vector<std::string>& args);

/// `git -C repo show --format= --no-color --no-ext-diff <sha>`.
std::string show_diff(const std::string& repo, const std::string& sha);

/// Content of `path` at `rev`, or nullopt when it does not exist there.
std::optional<std::string> show_file(const std::string& repo, const std::string& rev, const std::string& path);

}  // namespace omega::git
