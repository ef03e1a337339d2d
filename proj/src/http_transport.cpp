#include "wontfix/http_transport.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace wontfix {

using nlohmann::json;

namespace {

std::string lowercase(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

std::optional<std::string> HttpResponse::header(const std::string& lowercase_name) const {
    const auto it = headers.find(lowercase_name);
    if (it == headers.end()) return std::nullopt;
    return it->second;
}

// --- httplib ------------------------------------------------------------------

struct HttplibTransport::Impl {
    httplib::Client client;
    explicit Impl(const std::string& base) : client(base) {}
};

HttplibTransport::HttplibTransport(std::string base_url, std::chrono::seconds timeout)
    : impl_(std::make_unique<Impl>(base_url)) {
    impl_->client.set_connection_timeout(timeout);
    impl_->client.set_read_timeout(timeout);
    impl_->client.set_follow_location(true);
}

HttplibTransport::~HttplibTransport() = default;

HttpResponse HttplibTransport::get(const std::string& target, const HeaderMap& headers) {
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);
    auto result = impl_->client.Get(target, h);
    if (!result) throw TransportFailure("GET " + target + " failed: " + httplib::to_string(result.error()));
    HttpResponse r;
    r.status = result->status;
    r.body = result->body;
    for (const auto& [k, v] : result->headers) r.headers[lowercase(k)] = v;
    return r;
}

// --- fixtures -----------------------------------------------------------------

FixtureTransport FixtureTransport::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError(std::string("fixture is not valid JSON: ") + e.what());
    }
    if (!j.is_array()) throw DataError("fixture must be a JSON array");
    FixtureTransport t;
    for (const auto& entry : j) {
        HttpResponse r;
        r.status = entry.value("status", 200);
        if (const auto it = entry.find("headers"); it != entry.end())
            for (const auto& [k, v] : it->items()) r.headers[lowercase(k)] = v.is_string() ? v.get<std::string>() : v.dump();
        if (const auto it = entry.find("body"); it != entry.end())
            r.body = it->is_string() ? it->get<std::string>() : it->dump();
        t.add(entry.at("target").get<std::string>(), std::move(r));
    }
    return t;
}

FixtureTransport FixtureTransport::from_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open fixture '" + path.string() + "'");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text);
}

void FixtureTransport::add(const std::string& target, HttpResponse response) {
    responses_[target].push_back(std::move(response));
}

HttpResponse FixtureTransport::get(const std::string& target, const HeaderMap&) {
    if (fail_after_ && log_.size() >= *fail_after_) throw SimulatedCrash();
    log_.push_back(target);
    const auto it = responses_.find(target);
    if (it == responses_.end() || it->second.empty()) {
        HttpResponse r;
        r.status = 404;
        r.body = R"({"message":"Not Found"})";
        return r;
    }
    HttpResponse r = it->second.front();
    if (it->second.size() > 1) it->second.pop_front();
    return r;
}

HttpResponse RecordingTransport::get(const std::string& target, const HeaderMap& headers) {
    HttpResponse r = inner_.get(target, headers);
    exchanges_.emplace_back(target, r);
    return r;
}

void RecordingTransport::save(const std::filesystem::path& path) const {
    json out = json::array();
    for (const auto& [target, r] : exchanges_) {
        json entry = {{"target", target}, {"status", r.status}, {"headers", r.headers}};
        // Keep JSON bodies structured so fixtures stay readable.
        json parsed = json::parse(r.body, nullptr, false);
        entry["body"] = parsed.is_discarded() ? json(r.body) : parsed;
        out.push_back(std::move(entry));
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write '" + path.string() + "'");
    f << out.dump(1) << '\n';
}

// --- clocks -------------------------------------------------------------------

Timestamp SystemClock::now() { return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()); }

void SystemClock::sleep_for(std::chrono::seconds d) {
    if (d.count() > 0) std::this_thread::sleep_for(d);
}

void FakeClock::sleep_for(std::chrono::seconds d) {
    sleeps_.push_back(d);
    if (d.count() > 0) now_ += d;
}

}  // namespace wontfix
