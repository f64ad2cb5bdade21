#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cqmine {

// One entry of a file's first-parent history, oldest first.
struct Revision {
    std::string commit;     // full commit hash
    std::string committer;  // committer email, as recorded
    std::int64_t timestamp = 0;
};

// List the first-parent history of `file_path` within `repo_path`, oldest
// first. A file with no history yields an empty vector. Throws ConfigError
// if `repo_path` is not a git repository.
std::vector<Revision> list_revisions(const std::string& repo_path, const std::string& file_path);

// All paths tracked at HEAD whose name ends in one of `extensions`
// (case-sensitive match, e.g. ".c"). Paths containing tab or newline are
// excluded (they cannot be represented in the TSV output).
std::vector<std::string> list_tracked_files(const std::string& repo_path,
                                            const std::vector<std::string>& extensions);

// Contents of `path` as of `commit`, or nullopt when the object cannot be
// read (missing object, submodule entry, ...).
std::optional<std::string> read_blob(const std::string& repo_path, const std::string& commit,
                                     const std::string& path);

// Git blob id (SHA-1 over "blob <size>\0" + content), hex lowercase. Used as
// the cache key so identical contents are measured once.
std::string blob_id(const std::string& content);

struct MineOptions {
    std::vector<std::string> extensions = {".c"};
    int jobs = 1;
    std::string cache_dir;   // empty disables the on-disk cache
    std::string output_dir = ".";
};

struct MineStats {
    std::uint64_t files = 0;          // timelines mined
    std::uint64_t revisions = 0;      // history entries listed
    std::uint64_t records = 0;        // rows written (revisions - skipped)
    std::uint64_t cache_hits = 0;     // records served from the warm cache
    std::uint64_t computed = 0;       // blobs actually measured this run
    std::uint64_t skipped = 0;        // unreadable / binary blobs
    std::uint64_t lines_processed = 0;  // source lines measured this run
    double elapsed_seconds = 0.0;
    double lines_per_second = 0.0;
    std::string timeline_path;
    std::string manifest_path;
};

// Mine every matching file's history into `<output_dir>/<repo>.timeline.tsv`
// (tab-separated; header row; sorted by path, then commit order) and write
// run metadata to `<repo>.manifest.json`. Results are byte-identical
// regardless of worker count. Per-blob failures are skipped and logged to
// `log`; repository-level failures throw (ConfigError / IoError). The cache
// file is appended and flushed per entry, so an interrupted run resumes from
// where it stopped.
MineStats mine_repository(const std::string& repo_path, const MineOptions& options,
                          std::ostream& log);

// Column order of the timeline TSV: repo, path, commit, committer,
// timestamp, then the measurement record fields.
std::vector<std::string> timeline_field_names();

// "/work/linux.git/" -> "linux"; used to name output files.
std::string repo_display_name(const std::string& repo_path);

}  // namespace cqmine
