#pragma once

#include <filesystem>
#include <string>
#include <vector>

// Shared test fixtures: temp dirs, small known repos, and a synthetic
// repo generator for batch checks.

namespace csbtest {

class TempDir {
  public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

void write_file(const std::filesystem::path& dir, const std::string& rel,
                const std::string& content);

// bool IsDigit(const char d): standard-library-only function (group 1 shape).
extern const char* kIsDigitSource;

// is_set_opt_anc_info + its struct: custom-type function (group 2 shape).
extern const char* kOptAncSource;

// typedef + scmp + simplesort: helper-calling function (group 3 shape).
extern const char* kSimplesortSource;

// f -> g -> h call chain in one file.
extern const char* kChainSource;

/// Write a repo with `n_units` compilable functions of mixed shapes
/// (pure / struct-typed / helper-calling / macro-using). Deterministic.
void write_synthetic_repo(const std::filesystem::path& root, int n_units);

}  // namespace csbtest
