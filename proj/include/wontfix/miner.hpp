#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "wontfix/corpus.hpp"
#include "wontfix/http_transport.hpp"

namespace wontfix {

class MinerError : public Error {
public:
    using Error::Error;
};

class AuthError : public MinerError {
public:
    using MinerError::MinerError;
};

class NotFoundError : public MinerError {
public:
    using MinerError::MinerError;
};

class RateLimitedError : public MinerError {
public:
    using MinerError::MinerError;
};

class TransportError : public MinerError {
public:
    TransportError(const std::string& what, std::size_t retries) : MinerError(what), retries_(retries) {}
    std::size_t retries() const { return retries_; }

private:
    std::size_t retries_;
};

struct RepoRef {
    std::string full_name;
    std::uint64_t stars = 0;
    std::string primary_language;

    bool operator==(const RepoRef&) const = default;
};

struct ThrottleConfig {
    // Fixed pause after every response, as in the original collection scripts.
    bool legacy = false;
    std::chrono::seconds legacy_pause{40};
    // Quota counts as exhausted when x-ratelimit-remaining <= threshold.
    long quota_threshold = 0;
    std::chrono::seconds page_delay{0};
    std::chrono::seconds repo_delay{1};
};

// Wait owed after a successful response: legacy_pause in legacy mode,
// (reset - now) + 1 s when the quota is exhausted, page_delay otherwise.
std::chrono::seconds throttle_wait(const HttpResponse& response, const ThrottleConfig& config, Timestamp now);

struct MinerConfig {
    std::string language = "C#";
    std::size_t top_n = 1000;
    // When non-empty, these repos are mined and discovery is skipped.
    std::vector<std::string> repos;
    std::optional<std::string> token;
    ThrottleConfig throttle;
    // Longest rate-limit wait accepted before giving up with RateLimitedError.
    std::chrono::seconds max_wait{3600};
    std::size_t max_retries = 5;
    std::chrono::seconds retry_base{2};
    bool second_pass = true;
    std::size_t per_page = 100;
};

struct RepoProgress {
    bool completed = false;
    int pass = 1;  // 1: created ascending, 2: wontfix re-check by recent updates
    std::size_t last_page = 0;
    std::uint64_t last_issue = 0;
};

struct MinerCheckpoint {
    std::string language;
    bool discovered = false;
    std::vector<RepoRef> repos;
    std::map<std::string, RepoProgress> progress;
    // No request may be sent before this instant (epoch seconds).
    std::int64_t not_before = 0;
    // Effective configuration of the run that created the checkpoint.
    nlohmann::json run_config = nlohmann::json::object();

    nlohmann::json to_json() const;
    static MinerCheckpoint from_json(const nlohmann::json& j);
};

// Reads a checkpoint, or returns nullopt when the file does not exist.
std::optional<MinerCheckpoint> load_checkpoint(const std::filesystem::path& path);
// Writes to a temporary file in the same directory and renames it over path.
void save_checkpoint(const std::filesystem::path& path, const MinerCheckpoint& checkpoint);

// Ids already present in a JSONL output. A trailing line that is incomplete
// or unparsable (the writer died mid-line) is cut off the file.
std::set<std::string> scan_emitted_ids(const std::filesystem::path& path);

struct MineSummary {
    std::size_t repos = 0;
    std::size_t emitted = 0;           // records written by this run
    std::size_t already_emitted = 0;   // ids found in the output at start
    std::size_t second_pass_added = 0;
    std::size_t requests = 0;
};

std::string percent_encode(std::string_view text);

class Miner {
public:
    Miner(HttpTransport& transport, Clock& clock, MinerConfig config);

    // Top repositories by stars for the configured language, skipping those
    // without issue labels.
    std::vector<RepoRef> discover_repos();

    // Every closed issue (pull requests excluded) with comments attached,
    // including the second wontfix pass.
    std::vector<IssueRecord> fetch_closed_issues(const RepoRef& repo);

    std::vector<CommentRecord> fetch_comments(const std::string& repo, std::uint64_t number);

    // Resumable run writing JSONL to `out`, checkpointing to `checkpoint`.
    MineSummary run(const std::filesystem::path& out, const std::filesystem::path& checkpoint);

    std::size_t requests() const { return requests_; }
    // Stored in new checkpoints.
    void set_run_config(nlohmann::json config) { run_config_ = std::move(config); }

private:
    struct Page {
        nlohmann::json body;
        bool has_next = false;
    };

    Page get_page(const std::string& target);
    nlohmann::json get_json(const std::string& target, bool* has_next);
    void wait_until_allowed();
    std::optional<IssueRecord> issue_from_json(const std::string& repo, const nlohmann::json& item);
    std::string issues_target(const std::string& repo, int pass, std::size_t page) const;

    HttpTransport& transport_;
    Clock& clock_;
    MinerConfig config_;
    Timestamp not_before_{};
    std::size_t requests_ = 0;
    nlohmann::json run_config_ = nlohmann::json::object();
    // Set during run() so rate-limit waits are persisted.
    MinerCheckpoint* checkpoint_ = nullptr;
    const std::filesystem::path* checkpoint_path_ = nullptr;
};

}  // namespace wontfix
