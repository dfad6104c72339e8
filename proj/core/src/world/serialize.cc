// Copyright 2026 The visact Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "visact/world/serialize.h"

#include "visact/common/error.h"

namespace visact::world {
namespace {

Json ref_json(const ObjectRef& r) { return Json::array({r.name, r.id}); }

ObjectRef ref_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw DataFormatError("expected [name, id] object reference");
  return ObjectRef{j.at(0).get<std::string>(), j.at(1).get<int>()};
}

std::string_view state_name(StateValue v) {
  switch (v) {
    case StateValue::kOpen: return "open";
    case StateValue::kClosed: return "closed";
    case StateValue::kPoweredOn: return "powered_on";
    case StateValue::kPoweredOff: return "powered_off";
  }
  return "?";
}

std::string_view kind_name(PredicateKind k) {
  switch (k) {
    case PredicateKind::kInside: return "inside";
    case PredicateKind::kOn: return "on";
    case PredicateKind::kState: return "state";
    case PredicateKind::kHolding: return "holding";
    case PredicateKind::kSittingOn: return "sitting_on";
  }
  return "?";
}

template <class Fn>
auto guarded(std::string_view what, Fn&& fn) {
  try {
    return fn();
  } catch (const nlohmann::json::exception& e) {
    throw DataFormatError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

Json to_json(const SceneGraph& world) {
  Json rooms = Json::array();
  for (const Room& r : world.rooms) {
    rooms.push_back(Json{{"id", r.id}, {"name", r.name}, {"width", r.width}, {"height", r.height}});
  }
  Json objects = Json::array();
  for (const auto& [ref, s] : world.objects) {
    Json o{{"name", ref.name}, {"id", ref.id}};
    std::visit(
        [&](const auto& p) {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, FloorSpot>) {
            o["placement"] = Json{{"floor", Json::array({p.room, p.x, p.y})}};
          } else if constexpr (std::is_same_v<P, OnTop>) {
            o["placement"] = Json{{"on", ref_json(p.base)}};
          } else if constexpr (std::is_same_v<P, InsideOf>) {
            o["placement"] = Json{{"inside", ref_json(p.container)}};
          } else {
            o["placement"] = "held";
          }
        },
        s.placement);
    o["open"] = s.open;
    o["powered"] = s.powered;
    objects.push_back(std::move(o));
  }
  return Json{{"layout_id", world.layout_id}, {"seed", world.seed}, {"rooms", rooms}, {"objects", objects}};
}

Json to_json(const AgentState& agent) {
  Json holding = Json::array();
  for (const auto& h : agent.holding) holding.push_back(ref_json(h));
  return Json{{"room", agent.room},
              {"near", agent.near ? ref_json(*agent.near) : Json(nullptr)},
              {"holding", holding},
              {"posture", agent.posture == Posture::kSitting ? "sitting" : "standing"},
              {"seat", agent.seat ? ref_json(*agent.seat) : Json(nullptr)}};
}

Json to_json(const Task& task) {
  Json goal = Json::array();
  for (const Predicate& p : task.goal) {
    Json g{{"kind", kind_name(p.kind)}, {"a", p.a}};
    if (p.kind == PredicateKind::kInside || p.kind == PredicateKind::kOn) g["b"] = p.b;
    if (p.kind == PredicateKind::kState) g["state"] = state_name(p.state);
    goal.push_back(std::move(g));
  }
  return Json{{"name", task.name}, {"description", task.nl_description}, {"goal", goal}};
}

SceneGraph scene_from_json(const Json& j) {
  return guarded("scene", [&] {
    SceneGraph w;
    w.layout_id = j.at("layout_id").get<int>();
    w.seed = j.at("seed").get<uint64_t>();
    for (const Json& r : j.at("rooms")) {
      w.rooms.push_back(Room{r.at("id").get<int>(), r.at("name").get<std::string>(), r.at("width").get<int>(),
                             r.at("height").get<int>()});
    }
    for (const Json& o : j.at("objects")) {
      ObjectRef ref{o.at("name").get<std::string>(), o.at("id").get<int>()};
      ObjectState s;
      const Json& p = o.at("placement");
      if (p.is_string() && p.get<std::string>() == "held") {
        s.placement = InHand{};
      } else if (p.contains("floor")) {
        const Json& f = p.at("floor");
        s.placement = FloorSpot{f.at(0).get<int>(), f.at(1).get<int>(), f.at(2).get<int>()};
      } else if (p.contains("on")) {
        s.placement = OnTop{ref_from(p.at("on"))};
      } else if (p.contains("inside")) {
        s.placement = InsideOf{ref_from(p.at("inside"))};
      } else {
        throw DataFormatError("scene: unknown placement for " + ref.name);
      }
      s.open = o.at("open").get<bool>();
      s.powered = o.at("powered").get<bool>();
      if (!w.objects.emplace(ref, s).second) throw DataFormatError("scene: duplicate object " + ref.name);
    }
    return w;
  });
}

AgentState agent_from_json(const Json& j) {
  return guarded("agent", [&] {
    AgentState a;
    a.room = j.at("room").get<int>();
    if (!j.at("near").is_null()) a.near = ref_from(j.at("near"));
    for (const Json& h : j.at("holding")) a.holding.push_back(ref_from(h));
    const auto posture = j.at("posture").get<std::string>();
    if (posture == "sitting") {
      a.posture = Posture::kSitting;
    } else if (posture != "standing") {
      throw DataFormatError("agent: unknown posture '" + posture + "'");
    }
    if (!j.at("seat").is_null()) a.seat = ref_from(j.at("seat"));
    return a;
  });
}

std::string serialize(const SceneGraph& world) { return to_json(world).dump(2); }
std::string serialize(const AgentState& agent) { return to_json(agent).dump(2); }

SceneGraph parse_scene(std::string_view text) {
  return scene_from_json(guarded("scene", [&] { return Json::parse(text); }));
}

AgentState parse_agent(std::string_view text) {
  return agent_from_json(guarded("agent", [&] { return Json::parse(text); }));
}

}  // namespace visact::world
