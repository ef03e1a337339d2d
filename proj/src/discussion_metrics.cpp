#include "wontfix/discussion_metrics.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace wontfix {

double DiscussionMetrics::time_to_close() const {
    if (!time_to_close_days) throw MissingCloseTimeError("issue has no closing time");
    return *time_to_close_days;
}

std::size_t utf8_length(std::string_view text) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < text.size();) {
        const auto c = static_cast<unsigned char>(text[i]);
        std::size_t len = 1;
        if (c >= 0xF0 && c <= 0xF4)
            len = 4;
        else if (c >= 0xE0)
            len = c <= 0xEF ? 3 : 1;
        else if (c >= 0xC2)
            len = 2;
        if (len > 1) {
            if (i + len > text.size()) len = 1;
            for (std::size_t k = 1; k < len; ++k)
                if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) {
                    len = 1;
                    break;
                }
        }
        i += len;
        ++n;
    }
    return n;
}

DiscussionMetrics compute_metrics(const IssueRecord& issue, const MetricOptions& options) {
    DiscussionMetrics d;
    d.description_length = utf8_length(issue.body);
    d.n_comments = issue.comments.size();

    std::map<std::string, std::size_t> per_author;
    std::size_t messages = 0;
    if (options.count_opening_post) {
        ++per_author[issue.author];
        ++messages;
    }
    std::size_t total_size = 0;
    for (const auto& c : issue.comments) {
        ++per_author[c.author];
        ++messages;
        total_size += utf8_length(c.body);
    }
    d.n_actors = per_author.size();
    if (messages > 0) {
        std::size_t max_count = 0;
        for (const auto& [author, count] : per_author) {
            max_count = std::max(max_count, count);
            // Compare 3 * count with messages to keep the one-third boundary exact.
            if (3 * count > messages) ++d.major_authors;
            if (3 * count < messages) ++d.minor_authors;
        }
        d.max_author_percentage = static_cast<double>(max_count) / static_cast<double>(messages);
    }
    if (!issue.comments.empty()) {
        d.mean_comment_size = static_cast<double>(total_size) / static_cast<double>(issue.comments.size());
        d.time_to_discuss = days_between(issue.created_at, issue.comments.back().created_at);
    }
    if (issue.state == IssueState::closed && issue.closed_at)
        d.time_to_close_days = days_between(issue.created_at, *issue.closed_at);
    return d;
}

std::string_view metric_name(Metric m) {
    switch (m) {
        case Metric::n_comments: return "nCommentsT";
        case Metric::n_actors: return "nActorsT";
        case Metric::max_author_percentage: return "maxAuthorPercentage";
        case Metric::minor_authors: return "minorAuthors";
        case Metric::major_authors: return "majorAuthors";
        case Metric::time_to_close: return "timeToCloseIssue";
        case Metric::time_to_discuss: return "timeToDiscussIssue";
        case Metric::description_length: return "descriptionLength";
        case Metric::mean_comment_size: return "meanCommentSize";
    }
    return "";
}

Metric parse_metric(std::string_view name) {
    for (const Metric m : kAllMetrics)
        if (metric_name(m) == name) return m;
    throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

std::optional<double> metric_value(const DiscussionMetrics& d, Metric m) {
    switch (m) {
        case Metric::n_comments: return static_cast<double>(d.n_comments);
        case Metric::n_actors: return static_cast<double>(d.n_actors);
        case Metric::max_author_percentage: return d.max_author_percentage;
        case Metric::minor_authors: return static_cast<double>(d.minor_authors);
        case Metric::major_authors: return static_cast<double>(d.major_authors);
        case Metric::time_to_close: return d.time_to_close_days;
        case Metric::time_to_discuss: return d.time_to_discuss;
        case Metric::description_length: return static_cast<double>(d.description_length);
        case Metric::mean_comment_size: return d.mean_comment_size;
    }
    return std::nullopt;
}

}  // namespace wontfix
