#include "cqmine/miner.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "cqmine/errors.hpp"
#include "cqmine/metrics.hpp"
#include "cqmine/subprocess.hpp"
#include "cqmine/version.hpp"

namespace cqmine {

namespace {

std::string git_prefix(const std::string& repo_path) {
    return "git -C " + shell_quote(repo_path) + " ";
}

void require_repository(const std::string& repo_path) {
    CommandResult probe =
        run_command(git_prefix(repo_path) + "rev-parse --git-dir 2>/dev/null");
    if (!probe.ok()) {
        throw ConfigError("not a git repository: " + repo_path);
    }
}

bool ends_with_any(const std::string& path, const std::vector<std::string>& extensions) {
    for (const std::string& ext : extensions) {
        if (path.size() >= ext.size() &&
            path.compare(path.size() - ext.size(), ext.size(), ext) == 0) {
            return true;
        }
    }
    return false;
}

std::string sanitize_field(std::string value) {
    for (char& c : value) {
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    }
    return value;
}

// On-disk cache mapping blob id -> the fully formatted measurement fields.
// Storing the formatted strings (rather than re-serializing numbers) makes
// warm reruns byte-identical by construction. Appends are flushed per entry
// so an interrupted run acts as a checkpoint.
class MetricsCache {
public:
    explicit MetricsCache(const std::string& cache_dir) {
        if (cache_dir.empty()) return;
        std::filesystem::create_directories(cache_dir);
        path_ = (std::filesystem::path(cache_dir) / "metrics-cache.tsv").string();
        load();
        appender_.open(path_, std::ios::app | std::ios::binary);
        if (!appender_) {
            throw IoError("cannot open cache file for append: " + path_);
        }
        enabled_ = true;
    }

    bool enabled() const { return enabled_; }

    // Entries present before this run started.
    const std::string* find_loaded(const std::string& key) const {
        auto it = loaded_.find(key);
        return it == loaded_.end() ? nullptr : &it->second;
    }

    // Entries computed during this run (shared across workers).
    const std::string* find_fresh(const std::string& key) {
        std::lock_guard<std::mutex> guard(mutex_);
        auto it = fresh_.find(key);
        return it == fresh_.end() ? nullptr : &it->second;
    }

    void insert(const std::string& key, const std::string& fields) {
        std::lock_guard<std::mutex> guard(mutex_);
        auto [it, inserted] = fresh_.emplace(key, fields);
        if (!inserted || !enabled_) return;
        appender_ << key << '\t' << fields << '\n';
        appender_.flush();
    }

private:
    void load() {
        std::ifstream in(path_, std::ios::binary);
        if (!in) return;
        const size_t expected_tabs = record_field_names().size() - 1;
        std::string line;
        while (std::getline(in, line)) {
            size_t tab = line.find('\t');
            if (tab == std::string::npos || tab == 0) continue;
            std::string key = line.substr(0, tab);
            std::string fields = line.substr(tab + 1);
            if (static_cast<size_t>(std::count(fields.begin(), fields.end(), '\t')) !=
                expected_tabs) {
                continue;  // truncated write from an interrupted run
            }
            loaded_[std::move(key)] = std::move(fields);
        }
    }

    bool enabled_ = false;
    std::string path_;
    std::unordered_map<std::string, std::string> loaded_;
    std::unordered_map<std::string, std::string> fresh_;
    std::ofstream appender_;
    std::mutex mutex_;
};

struct FileResult {
    std::vector<std::string> rows;       // fully formatted timeline lines
    std::vector<std::string> log_lines;  // skip diagnostics, emitted in order
    std::uint64_t revisions = 0;
    std::uint64_t records = 0;
    std::uint64_t cache_hits = 0;
    std::uint64_t computed = 0;
    std::uint64_t skipped = 0;
    std::uint64_t lines_processed = 0;
};

}  // namespace

std::vector<Revision> list_revisions(const std::string& repo_path,
                                     const std::string& file_path) {
    CommandResult log = run_command(git_prefix(repo_path) +
                                    "log --first-parent --reverse --format='%H|%cE|%ct' -- " +
                                    shell_quote(file_path) + " 2>/dev/null");
    if (!log.ok()) {
        require_repository(repo_path);  // classifies a missing repo as ConfigError
        CommandResult head = run_command(git_prefix(repo_path) + "rev-parse HEAD 2>/dev/null");
        if (!head.ok()) return {};  // repository without commits: empty history
        throw IoError("git log failed for " + file_path + " in " + repo_path);
    }
    std::vector<Revision> revisions;
    std::istringstream lines(log.output);
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        size_t first = line.find('|');
        size_t last = line.rfind('|');
        if (first == std::string::npos || last == first) continue;
        Revision rev;
        rev.commit = line.substr(0, first);
        rev.committer = line.substr(first + 1, last - first - 1);
        const char* ts_begin = line.data() + last + 1;
        const char* ts_end = line.data() + line.size();
        auto [ptr, ec] = std::from_chars(ts_begin, ts_end, rev.timestamp);
        if (ec != std::errc() || ptr != ts_end || rev.commit.empty()) continue;
        revisions.push_back(std::move(rev));
    }
    return revisions;
}

std::vector<std::string> list_tracked_files(const std::string& repo_path,
                                            const std::vector<std::string>& extensions) {
    require_repository(repo_path);
    CommandResult ls =
        run_command(git_prefix(repo_path) + "ls-tree -r --name-only -z HEAD 2>/dev/null");
    std::vector<std::string> files;
    if (!ls.ok()) {
        return files;  // e.g. empty repository with no HEAD yet
    }
    size_t begin = 0;
    while (begin < ls.output.size()) {
        size_t end = ls.output.find('\0', begin);
        if (end == std::string::npos) end = ls.output.size();
        std::string path = ls.output.substr(begin, end - begin);
        begin = end + 1;
        if (path.empty() || !ends_with_any(path, extensions)) continue;
        if (path.find('\t') != std::string::npos || path.find('\n') != std::string::npos) {
            continue;  // unrepresentable in the TSV output
        }
        files.push_back(std::move(path));
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::optional<std::string> read_blob(const std::string& repo_path, const std::string& commit,
                                     const std::string& path) {
    CommandResult show = run_command(git_prefix(repo_path) + "show " +
                                     shell_quote(commit + ":" + path) + " 2>/dev/null");
    if (!show.ok()) return std::nullopt;
    return std::move(show.output);
}

std::string blob_id(const std::string& content) {
    std::string header = "blob " + std::to_string(content.size());
    header.push_back('\0');

    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int digest_len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, header.data(), header.size()) != 1 ||
        EVP_DigestUpdate(ctx, content.data(), content.size()) != 1 ||
        EVP_DigestFinal_ex(ctx, digest, &digest_len) != 1) {
        EVP_MD_CTX_free(ctx);
        throw IoError("SHA-1 digest computation failed");
    }
    EVP_MD_CTX_free(ctx);

    static const char* hex = "0123456789abcdef";
    std::string id;
    id.reserve(digest_len * 2);
    for (unsigned int i = 0; i < digest_len; ++i) {
        id.push_back(hex[digest[i] >> 4]);
        id.push_back(hex[digest[i] & 0xF]);
    }
    return id;
}

std::vector<std::string> timeline_field_names() {
    std::vector<std::string> names = {"repo", "path", "commit", "committer", "timestamp"};
    for (const std::string& field : record_field_names()) {
        names.push_back(field);
    }
    return names;
}

std::string repo_display_name(const std::string& repo_path) {
    std::string trimmed = repo_path;
    while (trimmed.size() > 1 && (trimmed.back() == '/' || trimmed.back() == '\\')) {
        trimmed.pop_back();
    }
    size_t slash = trimmed.find_last_of("/\\");
    std::string name = slash == std::string::npos ? trimmed : trimmed.substr(slash + 1);
    if (name.size() > 4 && name.compare(name.size() - 4, 4, ".git") == 0) {
        name.resize(name.size() - 4);
    }
    return name.empty() ? "repo" : name;
}

MineStats mine_repository(const std::string& repo_path, const MineOptions& options,
                          std::ostream& log) {
    require_repository(repo_path);
    const std::string repo_name = repo_display_name(repo_path);
    const std::vector<std::string> files = list_tracked_files(repo_path, options.extensions);

    MetricsCache cache(options.cache_dir);
    std::filesystem::create_directories(options.output_dir);

    const auto started = std::chrono::steady_clock::now();
    std::vector<FileResult> results(files.size());
    std::atomic<size_t> next_file{0};
    std::mutex failure_mutex;
    std::string failure;

    auto worker = [&]() {
        for (;;) {
            size_t index = next_file.fetch_add(1);
            if (index >= files.size()) return;
            const std::string& path = files[index];
            FileResult& result = results[index];
            try {
                std::vector<Revision> revisions = list_revisions(repo_path, path);
                result.revisions = revisions.size();
                for (const Revision& rev : revisions) {
                    std::optional<std::string> content = read_blob(repo_path, rev.commit, path);
                    if (!content) {
                        ++result.skipped;
                        result.log_lines.push_back("skipped " + path + " @ " + rev.commit +
                                                   ": blob unreadable");
                        continue;
                    }
                    if (content->find('\0') != std::string::npos) {
                        ++result.skipped;
                        result.log_lines.push_back("skipped " + path + " @ " + rev.commit +
                                                   ": binary content");
                        continue;
                    }
                    const std::string key = blob_id(*content);
                    const std::string* fields = cache.find_loaded(key);
                    if (fields != nullptr) {
                        ++result.cache_hits;
                    } else {
                        fields = cache.find_fresh(key);
                        if (fields == nullptr) {
                            FileRecord record = analyze_source(*content);
                            result.lines_processed += record.metrics.n_lines;
                            ++result.computed;
                            cache.insert(key, format_record(record));
                            fields = cache.find_fresh(key);
                        }
                    }
                    std::string row = repo_name;
                    row += '\t';
                    row += path;
                    row += '\t';
                    row += rev.commit;
                    row += '\t';
                    row += sanitize_field(rev.committer);
                    row += '\t';
                    row += std::to_string(rev.timestamp);
                    row += '\t';
                    row += *fields;
                    result.rows.push_back(std::move(row));
                    ++result.records;
                }
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> guard(failure_mutex);
                if (failure.empty()) failure = e.what();
                return;
            }
        }
    };

    const int jobs = std::max(1, options.jobs);
    if (jobs == 1 || files.size() <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const size_t n_threads = std::min<size_t>(static_cast<size_t>(jobs), files.size());
        pool.reserve(n_threads);
        for (size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (!failure.empty()) {
        throw IoError("mining aborted (cache checkpoint kept): " + failure);
    }

    const auto finished = std::chrono::steady_clock::now();

    MineStats stats;
    stats.files = files.size();
    stats.elapsed_seconds = std::chrono::duration<double>(finished - started).count();

    const std::filesystem::path out_dir(options.output_dir);
    stats.timeline_path = (out_dir / (repo_name + ".timeline.tsv")).string();
    stats.manifest_path = (out_dir / (repo_name + ".manifest.json")).string();

    std::ofstream timeline(stats.timeline_path, std::ios::binary | std::ios::trunc);
    if (!timeline) throw IoError("cannot write " + stats.timeline_path);
    {
        const std::vector<std::string> header = timeline_field_names();
        for (size_t i = 0; i < header.size(); ++i) {
            if (i > 0) timeline << '\t';
            timeline << header[i];
        }
        timeline << '\n';
    }
    for (const FileResult& result : results) {
        for (const std::string& line : result.log_lines) log << line << '\n';
        for (const std::string& row : result.rows) timeline << row << '\n';
        stats.revisions += result.revisions;
        stats.records += result.records;
        stats.cache_hits += result.cache_hits;
        stats.computed += result.computed;
        stats.skipped += result.skipped;
        stats.lines_processed += result.lines_processed;
    }
    timeline.close();
    if (!timeline) throw IoError("failed writing " + stats.timeline_path);

    stats.lines_per_second = stats.elapsed_seconds > 0.0
                                 ? static_cast<double>(stats.lines_processed) / stats.elapsed_seconds
                                 : 0.0;

    std::ofstream manifest(stats.manifest_path, std::ios::binary | std::ios::trunc);
    if (!manifest) throw IoError("cannot write " + stats.manifest_path);
    manifest << "{\n";
    manifest << "  \"tool\": \"cqmine\",\n";
    manifest << "  \"version\": \"" << kVersion << "\",\n";
    manifest << "  \"repo\": \"" << repo_name << "\",\n";
    manifest << "  \"extensions\": \"";
    for (size_t i = 0; i < options.extensions.size(); ++i) {
        if (i > 0) manifest << ",";
        manifest << options.extensions[i];
    }
    manifest << "\",\n";
    manifest << "  \"jobs\": " << jobs << ",\n";
    manifest << "  \"cache\": " << (cache.enabled() ? "true" : "false") << ",\n";
    manifest << "  \"files\": " << stats.files << ",\n";
    manifest << "  \"revisions\": " << stats.revisions << ",\n";
    manifest << "  \"records\": " << stats.records << ",\n";
    manifest << "  \"cache_hits\": " << stats.cache_hits << ",\n";
    manifest << "  \"skipped\": " << stats.skipped << "\n";
    manifest << "}\n";
    manifest.close();
    if (!manifest) throw IoError("failed writing " + stats.manifest_path);

    return stats;
}

}  // namespace cqmine
