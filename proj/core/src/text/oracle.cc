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

#include "visact/text/oracle.h"

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "visact/common/error.h"
#include "visact/text/caption.h"

namespace visact::text {
namespace {

using dsl::ObjectRef;
using dsl::Verb;
using world::SceneGraph;

std::string np(const SceneGraph& world, const ObjectRef& ref, bool with_state) {
  std::string out = "the ";
  if (with_state) {
    const std::string adj = state_words(world, ref);
    if (!adj.empty()) out += adj + " ";
  }
  return out + ref.name;
}

std::string activity(const SceneGraph& world, const world::AgentState& agent,
                     const std::optional<dsl::ActionStep>& last) {
  std::optional<dsl::VerbInfo> info;
  if (last) info = dsl::lookup_verb(last->verb);
  if (!info || static_cast<int>(last->args.size()) != info->arity) {
    if (agent.posture == world::Posture::kSitting && agent.seat) return "sits on " + np(world, *agent.seat, false);
    return "stands";
  }
  const auto& a = last->args;
  switch (info->verb) {
    case Verb::kWalk: return "walks to " + np(world, a[0], true);
    case Verb::kRun: return "runs to " + np(world, a[0], true);
    case Verb::kGrab: return "grabs " + np(world, a[0], false);
    case Verb::kOpen: return "opens " + np(world, a[0], false);
    case Verb::kClose: return "closes " + np(world, a[0], false);
    case Verb::kSwitchOn: return "switches on " + np(world, a[0], false);
    case Verb::kSwitchOff: return "switches off " + np(world, a[0], false);
    case Verb::kPutOn: return "puts " + np(world, a[0], false) + " on " + np(world, a[1], false);
    case Verb::kPutIn: return "puts " + np(world, a[0], false) + " in " + np(world, a[1], false);
    case Verb::kSit: return "sits on " + np(world, a[0], true);
    case Verb::kStandUp: return "stands up";
  }
  return "stands";
}

// Visible, agent-adjacent floor-stack tops ordered by distance.
std::vector<ObjectRef> salient_objects(const SceneGraph& world, const world::AgentState& agent, world::View view,
                                       const std::vector<ObjectRef>& exclude, int k) {
  const world::Pose pose = world::agent_pose(world, agent);
  const world::RenderConfig cfg;
  struct Cand {
    int cheb;
    int manh;
    ObjectRef ref;
  };
  std::vector<Cand> cands;
  for (const auto& [ref, s] : world.objects) {
    const auto* f = std::get_if<world::FloorSpot>(&s.placement);
    if (!f || f->room != agent.room) continue;
    const int dx = f->x - pose.x;
    const int dy = f->y - pose.y;
    const int cheb = std::max(std::abs(dx), std::abs(dy));
    if (cheb > 1) continue;
    if (view == world::View::kFrontPerson) {
      static constexpr int kFx[4] = {0, 1, 0, -1};
      static constexpr int kFy[4] = {-1, 0, 1, 0};
      if (dx * kFx[pose.dir] + dy * kFy[pose.dir] < 0) continue;  // behind the agent
    }
    // The visible thing is the top of the stack.
    ObjectRef top = ref;
    for (bool climbed = true; climbed;) {
      climbed = false;
      for (const auto& c : world.children_of(top)) {
        if (std::holds_alternative<world::OnTop>(world.find(c)->placement)) {
          top = c;
          climbed = true;
        }
      }
    }
    if (std::find(exclude.begin(), exclude.end(), top) != exclude.end()) continue;
    cands.push_back({cheb, std::abs(dx) + std::abs(dy), top});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
    if (x.cheb != y.cheb) return x.cheb < y.cheb;
    if (x.manh != y.manh) return x.manh < y.manh;
    return x.ref < y.ref;
  });
  std::vector<ObjectRef> out;
  for (const auto& c : cands) {
    if (static_cast<int>(out.size()) >= k) break;
    out.push_back(c.ref);
  }
  return out;
}

struct VerbTemplates {
  std::vector<std::string_view> forms;  // lemma first
  std::vector<std::string_view> templates;
};

const std::vector<VerbTemplates>& verb_table() {
  static const std::vector<VerbTemplates> kTable = {
      {{"walk", "walks", "walking", "walked"},
       {"the agent walks to the {}", "the agent goes to the {}", "the agent heads to the {}"}},
      {{"run", "runs", "running", "ran"}, {"the agent runs on the {}", "the agent jogs on the {}"}},
      {{"sit", "sits", "sitting", "sat"}, {"the agent sits on the {}", "the agent is sitting on the {}"}},
      {{"grab", "grabs", "grabbing", "grabbed"}, {"the agent grabs the {}", "the agent picks up the {}"}},
      {{"open", "opens", "opening", "opened"}, {"the agent opens the {}"}},
      {{"close", "closes", "closing", "closed"}, {"the agent closes the {}", "the agent shuts the {}"}},
      {{"switch", "switches", "switching", "switched"}, {"the agent switches on the {}", "the agent turns on the {}"}},
      {{"put", "puts", "putting"}, {"the agent puts down the {}"}},
      {{"watch", "watches", "watching", "watched"}, {"the agent watches the {}"}},
      {{"read", "reads", "reading"}, {"the agent reads the {}"}},
      {{"use", "uses", "using", "used"}, {"the agent uses the {}"}},
      {{"lie", "lies", "lying", "lay"}, {"the agent lies on the {}"}},
      {{"stand", "stands", "standing", "stood"}, {"the agent stands near the {}"}},
  };
  return kTable;
}

const VerbTemplates* find_verb(std::string_view verb) {
  for (const auto& v : verb_table()) {
    if (std::find(v.forms.begin(), v.forms.end(), verb) != v.forms.end()) return &v;
  }
  return nullptr;
}

}  // namespace

std::string state_words(const SceneGraph& world, const ObjectRef& ref) {
  const auto* s = world.find(ref);
  if (!s) return {};
  const auto& cls = world.class_of(ref);
  std::string out;
  if (cls.has(world::Affordance::kOpenable)) out += s->open ? "open" : "closed";
  if (cls.has(world::Affordance::kSwitchable)) {
    if (!out.empty()) out += ' ';
    out += s->powered ? "powered" : "unpowered";
  }
  return out;
}

std::string caption_oracle(const SceneGraph& world, const world::AgentState& agent, world::View view,
                           const std::optional<dsl::ActionStep>& last_action, const OracleOptions& opts) {
  std::string out = "the agent " + activity(world, agent, last_action);

  std::vector<ObjectRef> named;
  if (last_action) named = last_action->args;
  if (agent.seat) named.push_back(*agent.seat);

  std::vector<ObjectRef> held;
  for (const auto& h : agent.holding) {
    if (std::find(named.begin(), named.end(), h) == named.end()) held.push_back(h);
  }
  for (size_t i = 0; i < held.size(); ++i) {
    out += i == 0 ? " holding " : " and ";
    out += np(world, held[i], false);
  }

  const auto near = salient_objects(world, agent, view, named, opts.salient);
  for (size_t i = 0; i < near.size(); ++i) {
    out += i == 0 ? " near " : " and ";
    out += np(world, near[i], true);
  }
  out += " in the " + world.rooms.at(agent.room).name;
  return out;
}

size_t template_count(std::string_view verb) {
  const auto* v = find_verb(verb);
  return v ? v->templates.size() : 0;
}

std::string expand_caption(std::string_view two_word, uint64_t seed) {
  const auto words = split_words(two_word);
  if (words.size() < 2) throw InvalidArgument("expand_caption: expected '<verb> <noun>', got '" + std::string(two_word) + "'");
  const auto* v = find_verb(words[0]);
  if (!v) throw UnknownVerbTemplate("no caption template for verb '" + words[0] + "'");
  std::string noun = words[1];
  for (size_t i = 2; i < words.size(); ++i) noun += " " + words[i];
  const std::string_view tpl = v->templates[seed % v->templates.size()];
  std::string out(tpl);
  out.replace(out.find("{}"), 2, noun);
  return out;
}

}  // namespace visact::text
