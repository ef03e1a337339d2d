#include "wontfix/miner.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace wontfix {

using nlohmann::json;
using std::chrono::seconds;

namespace {

std::optional<long long> header_int(const HttpResponse& r, const std::string& name) {
    const auto v = r.header(name);
    if (!v) return std::nullopt;
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc() || ptr != v->data() + v->size()) return std::nullopt;
    return out;
}

Timestamp from_epoch(long long s) { return Timestamp(seconds(s)); }

std::int64_t to_epoch(Timestamp t) { return t.time_since_epoch().count(); }

bool link_has_next(const HttpResponse& r) {
    const auto link = r.header("link");
    return link && link->find("rel=\"next\"") != std::string::npos;
}

AuthorRole role_from_association(std::string_view a) {
    if (a == "OWNER") return AuthorRole::owner;
    if (a == "MEMBER") return AuthorRole::member;
    if (a == "CONTRIBUTOR") return AuthorRole::contributor;
    if (a == "COLLABORATOR") return AuthorRole::collaborator;
    return AuthorRole::outsider;
}

std::string login_of(const json& user) {
    if (user.is_object() && user.contains("login") && user["login"].is_string()) return user["login"].get<std::string>();
    return "ghost";
}

std::string string_or_empty(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it != obj.end() && it->is_string() ? it->get<std::string>() : std::string();
}

}  // namespace

std::chrono::seconds throttle_wait(const HttpResponse& response, const ThrottleConfig& config, Timestamp now) {
    if (config.legacy) return config.legacy_pause;
    const auto remaining = header_int(response, "x-ratelimit-remaining");
    if (remaining && *remaining <= config.quota_threshold) {
        const auto reset = header_int(response, "x-ratelimit-reset");
        const seconds until_reset = reset ? std::max(seconds(0), from_epoch(*reset) - now) : seconds(60);
        return until_reset + seconds(1);
    }
    return config.page_delay;
}

std::string percent_encode(std::string_view text) {
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out;
    for (const char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(ch);
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 15]);
        }
    }
    return out;
}

// --- checkpoint ---------------------------------------------------------------

json MinerCheckpoint::to_json() const {
    json repos_json = json::array();
    for (const auto& r : repos)
        repos_json.push_back({{"full_name", r.full_name}, {"stars", r.stars}, {"language", r.primary_language}});
    json progress_json = json::object();
    for (const auto& [name, p] : progress)
        progress_json[name] = {
            {"completed", p.completed}, {"pass", p.pass}, {"last_page", p.last_page}, {"last_issue", p.last_issue}};
    return {{"version", 1},          {"language", language}, {"discovered", discovered},
            {"repos", repos_json},   {"progress", progress_json}, {"not_before", not_before}, {"run_config", run_config}};
}

MinerCheckpoint MinerCheckpoint::from_json(const json& j) {
    try {
        if (j.at("version").get<int>() != 1) throw DataError("unsupported checkpoint version");
        MinerCheckpoint c;
        c.language = j.at("language").get<std::string>();
        c.discovered = j.at("discovered").get<bool>();
        c.not_before = j.value("not_before", std::int64_t{0});
        c.run_config = j.value("run_config", json::object());
        for (const auto& r : j.at("repos"))
            c.repos.push_back({r.at("full_name").get<std::string>(), r.at("stars").get<std::uint64_t>(),
                               r.at("language").get<std::string>()});
        for (const auto& [name, p] : j.at("progress").items())
            c.progress[name] = {p.at("completed").get<bool>(), p.at("pass").get<int>(),
                                p.at("last_page").get<std::size_t>(), p.at("last_issue").get<std::uint64_t>()};
        return c;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed checkpoint: ") + e.what());
    }
}

std::optional<MinerCheckpoint> load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError("checkpoint '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return MinerCheckpoint::from_json(j);
}

void save_checkpoint(const std::filesystem::path& path, const MinerCheckpoint& checkpoint) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write checkpoint '" + tmp.string() + "'");
        out << checkpoint.to_json().dump(1) << '\n';
        out.flush();
        if (!out) throw Error("failed writing checkpoint '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::set<std::string> scan_emitted_ids(const std::filesystem::path& path) {
    std::set<std::string> ids;
    std::ifstream in(path, std::ios::binary);
    if (!in) return ids;
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    std::size_t pos = 0, good_end = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        ++line_no;
        if (nl == std::string::npos) break;  // unterminated tail: the writer died mid-line
        const std::string_view line(text.data() + pos, nl - pos);
        if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
            try {
                ids.insert(parse_issue_line(line, line_no).issue.id);
            } catch (const ParseError&) {
                throw DataError("output '" + path.string() + "' has a malformed record at line " +
                                std::to_string(line_no));
            }
        }
        pos = nl + 1;
        good_end = pos;
    }
    if (good_end < text.size()) std::filesystem::resize_file(path, good_end);
    return ids;
}

// --- requests -----------------------------------------------------------------

Miner::Miner(HttpTransport& transport, Clock& clock, MinerConfig config)
    : transport_(transport), clock_(clock), config_(std::move(config)) {
    not_before_ = clock_.now();
}

void Miner::wait_until_allowed() {
    const Timestamp now = clock_.now();
    if (now < not_before_) clock_.sleep_for(not_before_ - now);
}

json Miner::get_json(const std::string& target, bool* has_next) {
    HeaderMap headers = {{"Accept", "application/vnd.github+json"}, {"User-Agent", "wontfix-miner"}};
    if (config_.token && !config_.token->empty()) headers["Authorization"] = "Bearer " + *config_.token;

    std::size_t retries = 0;
    for (;;) {
        wait_until_allowed();
        HttpResponse r;
        ++requests_;
        try {
            r = transport_.get(target, headers);
        } catch (const TransportFailure& e) {
            if (retries >= config_.max_retries)
                throw TransportError("GET " + target + ": " + e.what() + " (after " + std::to_string(retries) + " retries)",
                                     retries);
            not_before_ = clock_.now() + config_.retry_base * (1L << std::min<std::size_t>(retries, 16));
            ++retries;
            continue;
        }
        const Timestamp now = clock_.now();

        if (r.status == 200) {
            not_before_ = now + throttle_wait(r, config_.throttle, now);
            if (checkpoint_ && not_before_ - now > config_.throttle.page_delay) {
                checkpoint_->not_before = to_epoch(not_before_);
                save_checkpoint(*checkpoint_path_, *checkpoint_);
            }
            if (has_next) *has_next = link_has_next(r);
            try {
                return json::parse(r.body);
            } catch (const json::parse_error& e) {
                throw MinerError("GET " + target + " returned invalid JSON: " + e.what());
            }
        }
        if (r.status == 401) throw AuthError("GET " + target + ": 401 unauthorized (check the token)");
        if (r.status == 403 || r.status == 429) {
            const auto remaining = header_int(r, "x-ratelimit-remaining");
            const auto retry_after = header_int(r, "retry-after");
            if ((remaining && *remaining == 0) || retry_after) {
                seconds wait;
                if (retry_after)
                    wait = seconds(std::max<long long>(0, *retry_after));
                else if (const auto reset = header_int(r, "x-ratelimit-reset"))
                    wait = std::max(seconds(0), from_epoch(*reset) - now) + seconds(1);
                else
                    wait = seconds(60);
                if (wait > config_.max_wait)
                    throw RateLimitedError("GET " + target + ": rate limited for " + std::to_string(wait.count()) +
                                           " s, more than the allowed " + std::to_string(config_.max_wait.count()) + " s");
                not_before_ = now + wait;
                if (checkpoint_) {
                    checkpoint_->not_before = to_epoch(not_before_);
                    save_checkpoint(*checkpoint_path_, *checkpoint_);
                }
                continue;
            }
            throw AuthError("GET " + target + ": 403 forbidden");
        }
        if (r.status == 404) throw NotFoundError("GET " + target + ": 404 not found");
        if (r.status >= 500) {
            if (retries >= config_.max_retries)
                throw TransportError("GET " + target + ": HTTP " + std::to_string(r.status) + " (after " +
                                         std::to_string(retries) + " retries)",
                                     retries);
            not_before_ = now + config_.retry_base * (1L << std::min<std::size_t>(retries, 16));
            ++retries;
            continue;
        }
        throw MinerError("GET " + target + ": unexpected HTTP " + std::to_string(r.status));
    }
}

Miner::Page Miner::get_page(const std::string& target) {
    Page p;
    p.body = get_json(target, &p.has_next);
    return p;
}

// --- discovery ----------------------------------------------------------------

std::vector<RepoRef> Miner::discover_repos() {
    std::vector<RepoRef> out;
    // The search API serves at most 1000 results.
    for (std::size_t page = 1; out.size() < config_.top_n && page <= 10; ++page) {
        const std::string target = "/search/repositories?q=language:" + percent_encode(config_.language) +
                                   "&sort=stars&order=desc&per_page=" + std::to_string(config_.per_page) +
                                   "&page=" + std::to_string(page);
        const Page p = get_page(target);
        const json& items = p.body.at("items");
        for (const auto& item : items) {
            if (out.size() >= config_.top_n) break;
            RepoRef r{item.at("full_name").get<std::string>(), item.value("stargazers_count", std::uint64_t{0}),
                      string_or_empty(item, "language")};
            const json labels = get_json("/repos/" + r.full_name + "/labels?per_page=1", nullptr);
            if (labels.is_array() && !labels.empty()) out.push_back(std::move(r));
        }
        if (items.size() < config_.per_page) break;
    }
    return out;
}

// --- issues -------------------------------------------------------------------

std::string Miner::issues_target(const std::string& repo, int pass, std::size_t page) const {
    const char* order = pass == 1 ? "&sort=created&direction=asc" : "&sort=updated&direction=desc";
    return "/repos/" + repo + "/issues?state=closed&per_page=" + std::to_string(config_.per_page) +
           "&page=" + std::to_string(page) + order;
}

std::vector<CommentRecord> Miner::fetch_comments(const std::string& repo, std::uint64_t number) {
    std::vector<CommentRecord> out;
    for (std::size_t page = 1;; ++page) {
        bool has_next = false;
        const json items = get_json("/repos/" + repo + "/issues/" + std::to_string(number) +
                                        "/comments?per_page=" + std::to_string(config_.per_page) +
                                        "&page=" + std::to_string(page),
                                    &has_next);
        if (!items.is_array()) throw MinerError("comment listing for " + repo + "#" + std::to_string(number) + " is not an array");
        for (const auto& c : items) {
            CommentRecord rec;
            try {
                rec.author = login_of(c.value("user", json()));
                rec.body = string_or_empty(c, "body");
                rec.created_at = parse_timestamp(c.at("created_at").get<std::string>());
            } catch (const json::exception& e) {
                throw MinerError("unexpected comment payload in " + repo + "#" + std::to_string(number) + ": " + e.what());
            } catch (const std::invalid_argument& e) {
                throw MinerError("bad comment timestamp in " + repo + "#" + std::to_string(number) + ": " + e.what());
            }
            out.push_back(std::move(rec));
        }
        if (!has_next && items.size() < config_.per_page) break;
        if (items.empty()) break;
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const CommentRecord& a, const CommentRecord& b) { return a.created_at < b.created_at; });
    return out;
}

std::optional<IssueRecord> Miner::issue_from_json(const std::string& repo, const json& item) {
    if (item.contains("pull_request")) return std::nullopt;
    if (item.value("state", "") != "closed") return std::nullopt;
    try {
        IssueRecord r;
        const auto number = item.at("number").get<std::uint64_t>();
        r.repo = repo;
        r.id = repo + "#" + std::to_string(number);
        r.url = string_or_empty(item, "html_url");
        r.title = string_or_empty(item, "title");
        r.body = string_or_empty(item, "body");
        r.state = IssueState::closed;
        for (const auto& l : item.value("labels", json::array())) {
            if (l.is_string())
                r.raw_labels.push_back(l.get<std::string>());
            else if (l.is_object())
                r.raw_labels.push_back(string_or_empty(l, "name"));
        }
        r.created_at = parse_timestamp(item.at("created_at").get<std::string>());
        if (const auto it = item.find("closed_at"); it != item.end() && it->is_string())
            r.closed_at = std::max(r.created_at, parse_timestamp(it->get<std::string>()));
        r.author = login_of(item.value("user", json()));
        r.author_role = role_from_association(string_or_empty(item, "author_association"));
        if (item.value("comments", 0) > 0) r.comments = fetch_comments(repo, number);
        // Server clocks occasionally stamp a comment a second before its issue.
        for (auto& c : r.comments) c.created_at = std::max(c.created_at, r.created_at);

        std::vector<std::string> notes;
        if (item.value("locked", false)) notes.emplace_back("locked");
        const std::string repo_url = string_or_empty(item, "repository_url");
        const std::string suffix = "/repos/" + repo;
        if (!repo_url.empty() &&
            (repo_url.size() < suffix.size() || repo_url.compare(repo_url.size() - suffix.size(), suffix.size(), suffix) != 0))
            notes.emplace_back("transferred");
        for (std::size_t i = 0; i < notes.size(); ++i) r.provenance += (i ? "," : "") + notes[i];
        return r;
    } catch (const json::exception& e) {
        throw MinerError("unexpected issue payload in " + repo + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw MinerError("bad timestamp in " + repo + ": " + e.what());
    }
}

std::vector<IssueRecord> Miner::fetch_closed_issues(const RepoRef& repo) {
    std::vector<IssueRecord> out;
    std::set<std::string> seen;
    for (int pass = 1; pass <= (config_.second_pass ? 2 : 1); ++pass) {
        for (std::size_t page = 1;; ++page) {
            const Page p = get_page(issues_target(repo.full_name, pass, page));
            if (!p.body.is_array()) throw MinerError("issue listing for " + repo.full_name + " is not an array");
            for (const auto& item : p.body) {
                if (item.contains("pull_request") || item.value("state", "") != "closed") continue;
                const std::string id = repo.full_name + "#" + std::to_string(item.value("number", std::uint64_t{0}));
                if (seen.contains(id)) continue;
                if (pass == 2) {
                    IssueRecord probe;
                    for (const auto& l : item.value("labels", json::array()))
                        probe.raw_labels.push_back(l.is_object() ? string_or_empty(l, "name") : l.get<std::string>());
                    if (assign_class(probe) != IssueClass::wontfix) continue;
                }
                if (auto rec = issue_from_json(repo.full_name, item)) {
                    seen.insert(id);
                    out.push_back(std::move(*rec));
                }
            }
            if (!p.has_next && p.body.size() < config_.per_page) break;
            if (p.body.empty()) break;
        }
    }
    return out;
}

// --- resumable run --------------------------------------------------------------

MineSummary Miner::run(const std::filesystem::path& out_path, const std::filesystem::path& checkpoint_path) {
    MinerCheckpoint cp;
    if (auto loaded = load_checkpoint(checkpoint_path)) {
        cp = std::move(*loaded);
        if (config_.repos.empty() && cp.language != config_.language)
            throw DataError("checkpoint was written for language '" + cp.language + "', not '" + config_.language + "'");
    } else {
        cp.language = config_.language;
        cp.run_config = run_config_;
    }
    checkpoint_ = &cp;
    checkpoint_path_ = &checkpoint_path;
    struct Detach {
        Miner* m;
        ~Detach() {
            m->checkpoint_ = nullptr;
            m->checkpoint_path_ = nullptr;
        }
    } detach{this};

    not_before_ = std::max(not_before_, from_epoch(cp.not_before));

    MineSummary summary;
    std::set<std::string> emitted = scan_emitted_ids(out_path);
    summary.already_emitted = emitted.size();

    if (!cp.discovered) {
        if (!config_.repos.empty()) {
            for (const auto& name : config_.repos) cp.repos.push_back({name, 0, config_.language});
        } else {
            cp.repos = discover_repos();
        }
        cp.discovered = true;
        save_checkpoint(checkpoint_path, cp);
    }

    std::ofstream out(out_path, std::ios::binary | std::ios::app);
    if (!out) throw Error("cannot open output '" + out_path.string() + "'");

    bool first_repo = true;
    for (const auto& repo : cp.repos) {
        RepoProgress& prog = cp.progress[repo.full_name];
        ++summary.repos;
        if (prog.completed) continue;
        if (!first_repo) not_before_ = std::max(not_before_, clock_.now() + config_.throttle.repo_delay);
        first_repo = false;

        const int last_pass = config_.second_pass ? 2 : 1;
        while (prog.pass <= last_pass) {
            for (std::size_t page = prog.last_page + 1;; ++page) {
                const Page p = get_page(issues_target(repo.full_name, prog.pass, page));
                if (!p.body.is_array()) throw MinerError("issue listing for " + repo.full_name + " is not an array");
                for (const auto& item : p.body) {
                    if (item.contains("pull_request") || item.value("state", "") != "closed") continue;
                    const auto number = item.value("number", std::uint64_t{0});
                    const std::string id = repo.full_name + "#" + std::to_string(number);
                    if (emitted.contains(id)) continue;
                    if (prog.pass == 2) {
                        IssueRecord probe;
                        for (const auto& l : item.value("labels", json::array()))
                            probe.raw_labels.push_back(l.is_object() ? string_or_empty(l, "name") : l.get<std::string>());
                        if (assign_class(probe) != IssueClass::wontfix) continue;
                    }
                    auto rec = issue_from_json(repo.full_name, item);
                    if (!rec) continue;
                    out << issue_to_jsonl(*rec) << '\n';
                    out.flush();
                    if (!out) throw Error("failed writing '" + out_path.string() + "'");
                    emitted.insert(id);
                    ++summary.emitted;
                    if (prog.pass == 2) ++summary.second_pass_added;
                    prog.last_issue = number;
                }
                prog.last_page = page;
                cp.not_before = to_epoch(not_before_);
                save_checkpoint(checkpoint_path, cp);
                if ((!p.has_next && p.body.size() < config_.per_page) || p.body.empty()) break;
            }
            ++prog.pass;
            prog.last_page = 0;
            save_checkpoint(checkpoint_path, cp);
        }
        prog.completed = true;
        save_checkpoint(checkpoint_path, cp);
    }
    summary.requests = requests_;
    return summary;
}

}  // namespace wontfix
