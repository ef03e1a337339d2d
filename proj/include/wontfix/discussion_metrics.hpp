#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include "wontfix/corpus.hpp"

namespace wontfix {

class MissingCloseTimeError : public DataError {
public:
    using DataError::DataError;
};

struct MetricOptions {
    // Treat the opening post as one more message by the issue author when
    // counting participants (n_actors, shares, major/minor authors).
    bool count_opening_post = false;
};

struct DiscussionMetrics {
    std::size_t description_length = 0;  // code points of the body
    double max_author_percentage = 0.0;   // in [0, 1]
    std::size_t major_authors = 0;        // more than a third of the messages
    std::size_t minor_authors = 0;        // less than a third of the messages
    double mean_comment_size = 0.0;       // code points, 0 without comments
    std::size_t n_actors = 0;
    std::size_t n_comments = 0;
    std::optional<double> time_to_close_days;
    double time_to_discuss = 0.0;  // days to the last comment, 0 without comments

    // Throws MissingCloseTimeError when the issue has no closing time.
    double time_to_close() const;
};

DiscussionMetrics compute_metrics(const IssueRecord& issue, const MetricOptions& options = {});

// Number of Unicode code points in UTF-8 text; malformed bytes count as one each.
std::size_t utf8_length(std::string_view text);

// The nine metrics in the row order of the hypothesis-test table.
enum class Metric {
    n_comments,
    n_actors,
    max_author_percentage,
    minor_authors,
    major_authors,
    time_to_close,
    time_to_discuss,
    description_length,
    mean_comment_size,
};

inline constexpr std::array<Metric, 9> kAllMetrics = {
    Metric::n_comments,    Metric::n_actors,        Metric::max_author_percentage,
    Metric::minor_authors, Metric::major_authors,   Metric::time_to_close,
    Metric::time_to_discuss, Metric::description_length, Metric::mean_comment_size};

// Display names: nCommentsT, nActorsT, maxAuthorPercentage, minorAuthors,
// majorAuthors, timeToCloseIssue, timeToDiscussIssue, descriptionLength,
// meanCommentSize.
std::string_view metric_name(Metric m);
Metric parse_metric(std::string_view name);

// Value of one metric, or nullopt for time_to_close on an issue never closed.
std::optional<double> metric_value(const DiscussionMetrics& d, Metric m);

}  // namespace wontfix
