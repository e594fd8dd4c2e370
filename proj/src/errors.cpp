#include "spdc/errors.hpp"

#include <iostream>
#include <mutex>
#include <set>
#include <utility>

namespace spdc {

namespace {

std::mutex& sink_mutex() {
    static std::mutex m;
    return m;
}

WarningSink& current_sink() {
    static WarningSink sink = [](const std::string& msg) { std::cerr << "warning: " << msg << '\n'; };
    return sink;
}

} // namespace

WarningSink set_warning_sink(WarningSink sink) {
    std::lock_guard lock(sink_mutex());
    return std::exchange(current_sink(), std::move(sink));
}

void warn(const std::string& message) {
    std::lock_guard lock(sink_mutex());
    if (current_sink()) current_sink()(message);
}

void warn_once(const std::string& key, const std::string& message) {
    static std::mutex seen_mutex;
    static std::set<std::string> seen;
    {
        std::lock_guard lock(seen_mutex);
        if (!seen.insert(key).second) return;
    }
    warn(message);
}

} // namespace spdc
