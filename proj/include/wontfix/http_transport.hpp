#pragma once

#include <chrono>
#include <cstddef>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wontfix/error.hpp"
#include "wontfix/timestamp.hpp"

namespace wontfix {

// Header names are stored lowercased.
using HeaderMap = std::map<std::string, std::string>;

struct HttpResponse {
    int status = 200;
    HeaderMap headers;
    std::string body;

    std::optional<std::string> header(const std::string& lowercase_name) const;
};

// The request never produced a response (DNS, connect, TLS, timeout...).
class TransportFailure : public Error {
public:
    using Error::Error;
};

class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    // `target` is the path plus query, e.g. "/repos/a/b/labels?per_page=1".
    virtual HttpResponse get(const std::string& target, const HeaderMap& headers) = 0;
};

// cpp-httplib client for a fixed scheme://host[:port] base URL.
class HttplibTransport : public HttpTransport {
public:
    explicit HttplibTransport(std::string base_url = "https://api.github.com",
                              std::chrono::seconds timeout = std::chrono::seconds(30));
    ~HttplibTransport() override;
    HttpResponse get(const std::string& target, const HeaderMap& headers) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Thrown by FixtureTransport to emulate the process dying mid-run. It is not
// a wontfix::Error, so library code never swallows it.
class SimulatedCrash : public std::exception {
public:
    const char* what() const noexcept override { return "simulated crash"; }
};

// Replays recorded responses. Each target holds a queue; the last response
// for a target is repeated once the queue would run empty. Unknown targets
// answer 404.
class FixtureTransport : public HttpTransport {
public:
    FixtureTransport() = default;

    // Fixture file: a JSON array of {"target", "status", "headers", "body"}
    // where body is either a string or any JSON value (serialized on replay).
    static FixtureTransport from_file(const std::filesystem::path& path);
    static FixtureTransport from_json_text(const std::string& text);

    void add(const std::string& target, HttpResponse response);

    // Throw SimulatedCrash instead of serving request number n + 1.
    void fail_after(std::size_t n) { fail_after_ = n; }

    HttpResponse get(const std::string& target, const HeaderMap& headers) override;

    std::size_t request_count() const { return log_.size(); }
    const std::vector<std::string>& request_log() const { return log_; }

private:
    std::map<std::string, std::deque<HttpResponse>> responses_;
    std::vector<std::string> log_;
    std::optional<std::size_t> fail_after_;
};

// Forwards to another transport and keeps every exchange so a live session
// can be saved as a fixture file.
class RecordingTransport : public HttpTransport {
public:
    explicit RecordingTransport(HttpTransport& inner) : inner_(inner) {}
    HttpResponse get(const std::string& target, const HeaderMap& headers) override;
    void save(const std::filesystem::path& path) const;

private:
    HttpTransport& inner_;
    std::vector<std::pair<std::string, HttpResponse>> exchanges_;
};

class Clock {
public:
    virtual ~Clock() = default;
    virtual Timestamp now() = 0;
    virtual void sleep_for(std::chrono::seconds d) = 0;
};

class SystemClock : public Clock {
public:
    Timestamp now() override;
    void sleep_for(std::chrono::seconds d) override;
};

// Time advances only through sleep_for; every sleep is recorded.
class FakeClock : public Clock {
public:
    explicit FakeClock(Timestamp start) : now_(start) {}
    Timestamp now() override { return now_; }
    void sleep_for(std::chrono::seconds d) override;
    void advance(std::chrono::seconds d) { now_ += d; }
    const std::vector<std::chrono::seconds>& sleeps() const { return sleeps_; }

private:
    Timestamp now_;
    std::vector<std::chrono::seconds> sleeps_;
};

}  // namespace wontfix
