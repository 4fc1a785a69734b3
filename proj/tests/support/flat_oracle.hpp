#pragma once

// Reference executor for hierarchical models. It flattens the hierarchy down
// to its leaves, composes coupling chains (and their translations) into
// direct leaf-to-leaf routes, and runs a plain P-DEVS loop over the leaf
// behaviors. It deliberately shares no code with Simulator, Coordinator or
// the coupled-model adapter, so it can serve as their oracle.

#include "devs/core/behavior.hpp"
#include "devs/core/coupled.hpp"
#include "devs/core/registry.hpp"

#include <limits>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace devs::testing {

// time -> multiset of (root output port, rendered value)
using OutputTrace = std::map<double, std::multiset<std::pair<std::string, std::string>>>;

class FlatOracle {
public:
    FlatOracle(const CoupledSpec& root, const BehaviorRegistry& registry) : registry_(registry) {
        root_ = build(root, nullptr, "");
        for (std::size_t i = 0; i < leaves_.size(); ++i) {
            for (const auto& port : leaves_[i].behavior->output_ports()) {
                routes_[{i, port}] = resolve(leaves_[i].owner, PortRef{leaves_[i].name, port}, {});
            }
        }
        for (auto& leaf : leaves_) leaf.tn = advance(0.0, leaf.behavior->ta());
    }

    // Runs every event with time <= end_time, at most max_steps steps.
    OutputTrace run(double end_time, std::size_t max_steps = 100000) {
        OutputTrace trace;
        for (std::size_t step = 0; step < max_steps; ++step) {
            double t = inf;
            for (const auto& leaf : leaves_) t = std::min(t, leaf.tn);
            if (t == inf || t > end_time) break;

            std::vector<MessageBag> bags(leaves_.size());
            for (std::size_t i = 0; i < leaves_.size(); ++i) {
                if (leaves_[i].tn != t) continue;
                for (const auto& item : leaves_[i].behavior->lambda()) {
                    for (const auto& dest : routes_.at({i, item.port})) {
                        Payload v = item.value;
                        for (const auto* fn : dest.chain) v = (*fn)(v);
                        if (dest.leaf < 0) {
                            trace[t].emplace(dest.port, v.render());
                        } else {
                            bags[static_cast<std::size_t>(dest.leaf)].add(dest.port, v);
                        }
                    }
                }
            }
            for (std::size_t i = 0; i < leaves_.size(); ++i) {
                Leaf& leaf = leaves_[i];
                const bool imminent = leaf.tn == t;
                if (imminent && bags[i].empty()) {
                    leaf.behavior->delta_int();
                } else if (imminent) {
                    leaf.behavior->delta_con(bags[i]);
                } else if (!bags[i].empty()) {
                    leaf.behavior->delta_ext(Time(t - leaf.tl), bags[i]);
                } else {
                    continue;
                }
                leaf.tl = t;
                leaf.tn = advance(t, leaf.behavior->ta());
            }
            ++steps_;
        }
        return trace;
    }

    std::size_t steps() const { return steps_; }
    std::size_t leaf_count() const { return leaves_.size(); }

private:
    static constexpr double inf = std::numeric_limits<double>::infinity();

    struct Node {
        const CoupledSpec* spec = nullptr;
        Node* parent = nullptr;
        std::string name_in_parent;
        std::map<std::string, int> leaf_of;
        std::map<std::string, Node*> child_of;
    };

    struct Leaf {
        std::string name;
        Node* owner = nullptr;
        std::unique_ptr<AtomicBehavior> behavior;
        double tl = 0.0;
        double tn = inf;
    };

    struct Dest {
        int leaf; // -1 for an output of the root
        std::string port;
        std::vector<const Translation*> chain;
    };

    static double advance(double t, Time ta) { return ta.is_infinite() ? inf : t + ta.value(); }

    Node* build(const CoupledSpec& spec, Node* parent, const std::string& name_in_parent) {
        nodes_.push_back(std::make_unique<Node>());
        Node* node = nodes_.back().get();
        node->spec = &spec;
        node->parent = parent;
        node->name_in_parent = name_in_parent;
        for (const auto& c : spec.components) {
            if (c.is_coupled()) {
                node->child_of[c.name] = build(c.coupled(), node, c.name);
            } else {
                node->leaf_of[c.name] = static_cast<int>(leaves_.size());
                leaves_.push_back(Leaf{c.name, node, registry_.instantiate(c.atomic().kind, c.atomic().params)});
            }
        }
        return node;
    }

    std::vector<Dest> resolve(Node* node, const PortRef& src, std::vector<const Translation*> chain) {
        std::vector<Dest> out;
        for (const auto& c : node->spec->couplings) {
            if (!(c.from == src)) continue;
            auto next = chain;
            next.push_back(&registry_.translation(c.translation));
            if (node->spec->is_boundary(c.to)) {
                if (!node->parent) {
                    out.push_back(Dest{-1, c.to.port, next});
                } else {
                    auto up = resolve(node->parent, PortRef{node->name_in_parent, c.to.port}, next);
                    out.insert(out.end(), up.begin(), up.end());
                }
            } else if (auto leaf = node->leaf_of.find(c.to.component); leaf != node->leaf_of.end()) {
                out.push_back(Dest{leaf->second, c.to.port, next});
            } else {
                Node* child = node->child_of.at(c.to.component);
                auto down = resolve(child, PortRef{child->spec->name, c.to.port}, next);
                out.insert(out.end(), down.begin(), down.end());
            }
        }
        return out;
    }

    const BehaviorRegistry& registry_;
    std::vector<std::unique_ptr<Node>> nodes_;
    std::vector<Leaf> leaves_;
    Node* root_ = nullptr;
    std::map<std::pair<std::size_t, std::string>, std::vector<Dest>> routes_;
    std::size_t steps_ = 0;
};

} // namespace devs::testing
