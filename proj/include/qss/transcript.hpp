#ifndef QSS_TRANSCRIPT_HPP
#define QSS_TRANSCRIPT_HPP

// Append-only event log for protocol runs.  Replaying a protocol with the
// same seeds and adversary produces a byte-identical serialization, which is
// what the determinism tests assert.  Serialized as JSON-lines.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qss/field.hpp"

namespace qss {

struct TranscriptEvent {
    enum class Kind { Send, Broadcast, Coin, Measure, Accuse, Disqualify, Note };
    Kind kind;
    std::int64_t from = -1;  // player index, -1 for the protocol itself
    std::int64_t to = -1;
    std::string label;
    FeVec values;

    nlohmann::json to_json() const {
        nlohmann::json j;
        switch (kind) {
            case Kind::Send: j["type"] = "send"; break;
            case Kind::Broadcast: j["type"] = "broadcast"; break;
            case Kind::Coin: j["type"] = "coin"; break;
            case Kind::Measure: j["type"] = "measure"; break;
            case Kind::Accuse: j["type"] = "accuse"; break;
            case Kind::Disqualify: j["type"] = "disqualify"; break;
            case Kind::Note: j["type"] = "note"; break;
        }
        if (from >= 0) j["from"] = from;
        if (to >= 0) j["to"] = to;
        if (!label.empty()) j["label"] = label;
        if (!values.empty()) j["values"] = values;
        return j;
    }
};

class Transcript {
  public:
    void send(std::int64_t from, std::int64_t to, std::string label, FeVec values = {}) {
        events_.push_back({TranscriptEvent::Kind::Send, from, to, std::move(label),
                           std::move(values)});
    }
    void broadcast(std::int64_t from, std::string label, FeVec values = {}) {
        events_.push_back({TranscriptEvent::Kind::Broadcast, from, -1, std::move(label),
                           std::move(values)});
    }
    void coin(FeVec values) {
        events_.push_back({TranscriptEvent::Kind::Coin, -1, -1, "", std::move(values)});
    }
    void measure(std::int64_t player, std::string label, FeVec values) {
        events_.push_back({TranscriptEvent::Kind::Measure, player, -1, std::move(label),
                           std::move(values)});
    }
    void accuse(std::string label, FeVec positions) {
        events_.push_back({TranscriptEvent::Kind::Accuse, -1, -1, std::move(label),
                           std::move(positions)});
    }
    void disqualify(std::int64_t player) {
        events_.push_back({TranscriptEvent::Kind::Disqualify, player, -1, "", {}});
    }
    void note(std::string label, FeVec values = {}) {
        events_.push_back({TranscriptEvent::Kind::Note, -1, -1, std::move(label),
                           std::move(values)});
    }

    const std::vector<TranscriptEvent>& events() const { return events_; }

    void append(const Transcript& other) {
        events_.insert(events_.end(), other.events_.begin(), other.events_.end());
    }

    std::string to_jsonl() const {
        std::string out;
        for (const auto& e : events_) {
            out += e.to_json().dump();
            out += '\n';
        }
        return out;
    }

  private:
    std::vector<TranscriptEvent> events_;
};

}  // namespace qss

#endif
