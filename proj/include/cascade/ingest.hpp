#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cascade/svfr.hpp"
#include "cascade/tree.hpp"

namespace cascade {

enum class Action : std::uint8_t { kCreate, kView, kForward };

inline const char* to_string(Action a) {
    switch (a) {
        case Action::kCreate: return "create";
        case Action::kView: return "view";
        case Action::kForward: return "forward";
    }
    return "?";
}

struct CascadeEvent {
    std::string cascade_id;
    std::string actor;
    std::optional<std::string> parent_actor; // absent exactly for create
    Action action = Action::kView;
    std::int64_t timestamp = 0;
};

/// Raised on malformed lines or broken log invariants; the message carries
/// the offending line number or cascade id.
struct IngestError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Events grouped per cascade, time-sorted, first-occurrence deduplicated.
struct CascadeLog {
    std::map<std::string, std::vector<CascadeEvent>> cascades;
};

namespace detail {

inline Action parse_action(const std::string& s, std::size_t line_no) {
    if (s == "create") return Action::kCreate;
    if (s == "view") return Action::kView;
    if (s == "forward") return Action::kForward;
    throw IngestError("line " + std::to_string(line_no) + ": unknown action '" + s +
                      "'");
}

inline CascadeEvent parse_event_line(const std::string& line, std::size_t line_no) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw IngestError("line " + std::to_string(line_no) + ": " + e.what());
    }
    CascadeEvent ev;
    try {
        ev.cascade_id = j.at("cascade_id").get<std::string>();
        ev.actor = j.at("actor").get<std::string>();
        ev.action = parse_action(j.at("action").get<std::string>(), line_no);
        ev.timestamp = j.at("timestamp").get<std::int64_t>();
        if (j.contains("parent_actor") && !j["parent_actor"].is_null())
            ev.parent_actor = j["parent_actor"].get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw IngestError("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (ev.action == Action::kCreate && ev.parent_actor)
        throw IngestError("line " + std::to_string(line_no) +
                          ": create event must not have parent_actor");
    if (ev.action != Action::kCreate && !ev.parent_actor)
        throw IngestError("line " + std::to_string(line_no) + ": " +
                          to_string(ev.action) + " event requires parent_actor");
    return ev;
}

} // namespace detail

/// Parse JSONL events, group them by cascade, time-sort (stable), keep only
/// each actor's first event per action, and validate the log invariants:
/// exactly one create per cascade and every parent_actor already seen as
/// creator or forwarder.
inline CascadeLog parse_events(std::istream& in) {
    CascadeLog log;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        CascadeEvent ev = detail::parse_event_line(line, line_no);
        log.cascades[ev.cascade_id].push_back(std::move(ev));
    }

    for (auto& [id, events] : log.cascades) {
        std::stable_sort(events.begin(), events.end(),
                         [](const CascadeEvent& a, const CascadeEvent& b) {
                             return a.timestamp < b.timestamp;
                         });

        std::vector<CascadeEvent> kept;
        kept.reserve(events.size());
        std::set<std::pair<std::string, Action>> seen;
        std::set<std::string> sharers; // actors who created or forwarded
        bool has_create = false;
        for (CascadeEvent& ev : events) {
            if (!seen.insert({ev.actor, ev.action}).second)
                continue; // only the first view/share per user counts
            if (ev.action == Action::kCreate) {
                if (has_create)
                    throw IngestError("cascade " + id + ": multiple create events");
                has_create = true;
                sharers.insert(ev.actor);
            } else {
                if (!sharers.count(*ev.parent_actor))
                    throw IngestError("cascade " + id + ": parent_actor '" +
                                      *ev.parent_actor + "' of actor '" + ev.actor +
                                      "' has not created or forwarded");
                if (ev.action == Action::kForward) sharers.insert(ev.actor);
            }
            kept.push_back(std::move(ev));
        }
        if (!has_create)
            throw IngestError("cascade " + id + ": no create event");
        events = std::move(kept);
    }
    return log;
}

/// A cascade tree rebuilt from an event log. Roles mirror the simulation's
/// Cascade, but no underlying network is available, so d_max_f is absent.
struct IngestedCascade {
    std::string cascade_id;
    Tree tree;
    std::vector<std::string> actors;         // tree index -> actor id
    std::vector<std::uint8_t> forwarded;     // creator counts as forwarder
    std::vector<std::int64_t> arrival_time;  // event timestamps
    std::optional<node_t> d_max_f;           // never set by ingest
    std::size_t truncated_events = 0;        // dropped by the gap rule
};

/// Build one tree per cascade. If gap_cutoff_seconds is set, a cascade is cut
/// at the first inter-event gap strictly exceeding the cutoff and the
/// remainder discarded.
inline std::vector<IngestedCascade> to_cascade_trees(
    const CascadeLog& log,
    std::optional<std::int64_t> gap_cutoff_seconds = std::nullopt) {
    std::vector<IngestedCascade> out;
    out.reserve(log.cascades.size());
    for (const auto& [id, events] : log.cascades) {
        std::size_t n_events = events.size();
        if (gap_cutoff_seconds) {
            for (std::size_t i = 1; i < events.size(); ++i) {
                if (events[i].timestamp - events[i - 1].timestamp >
                    *gap_cutoff_seconds) {
                    n_events = i;
                    break;
                }
            }
        }

        IngestedCascade c;
        c.cascade_id = id;
        c.truncated_events = events.size() - n_events;
        std::vector<node_t> parent_of;
        std::unordered_map<std::string, node_t> index_of;
        for (std::size_t i = 0; i < n_events; ++i) {
            const CascadeEvent& ev = events[i];
            const auto found = index_of.find(ev.actor);
            if (found != index_of.end()) {
                // Known actor: a forward upgrades the role, a view is moot.
                if (ev.action == Action::kForward)
                    c.forwarded[static_cast<std::size_t>(found->second)] = 1;
                continue;
            }
            const node_t idx = static_cast<node_t>(parent_of.size());
            if (ev.action == Action::kCreate) {
                parent_of.push_back(0);
            } else {
                parent_of.push_back(index_of.at(*ev.parent_actor));
            }
            index_of.emplace(ev.actor, idx);
            c.actors.push_back(ev.actor);
            c.forwarded.push_back(ev.action == Action::kView ? 0 : 1);
            c.arrival_time.push_back(ev.timestamp);
        }
        c.tree = Tree::from_validated_parent_array(std::move(parent_of));
        out.push_back(std::move(c));
    }
    return out;
}

/// Serialize a simulated cascade as ingestable JSONL events. Timestamps are
/// the arrival steps; forwarders emit a view line then a forward line; actor
/// ids are "u<network id>".
inline void write_events(std::ostream& os, const Cascade& cascade,
                         const std::string& cascade_id) {
    const auto actor = [&](node_t tree_idx) {
        return "u" + std::to_string(cascade.network_ids[static_cast<std::size_t>(
                         tree_idx)]);
    };
    const auto emit = [&](const char* action, node_t tree_idx,
                          std::optional<node_t> parent_idx) {
        nlohmann::json j{
            {"cascade_id", cascade_id},
            {"actor", actor(tree_idx)},
            {"action", action},
            {"timestamp", cascade.arrival_step[static_cast<std::size_t>(tree_idx)]},
        };
        if (parent_idx) j["parent_actor"] = actor(*parent_idx);
        os << j.dump() << '\n';
    };

    emit("create", 0, std::nullopt);
    const std::vector<node_t>& parents = cascade.tree.parent_array();
    for (node_t i = 1; i < cascade.tree.size(); ++i) {
        emit("view", i, parents[static_cast<std::size_t>(i)]);
        if (cascade.forwarded[static_cast<std::size_t>(i)])
            emit("forward", i, parents[static_cast<std::size_t>(i)]);
    }
}

} // namespace cascade
