// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "peal/rational.hpp"

namespace peal {

using ArgumentId = std::string;

/// Letters, digits and underscore; non-empty; case-sensitive.
bool is_valid_argument_id(std::string_view id);

struct Edge {
    ArgumentId source;
    ArgumentId target;
    Rational weight;

    [[nodiscard]] bool is_attack() const { return weight < 0; }
    [[nodiscard]] bool is_support() const { return weight > 0; }
    bool operator==(const Edge&) const = default;
};

/// An in-neighbour together with the weight of its edge.
struct Neighbor {
    ArgumentId id;
    Rational weight;
    bool operator==(const Neighbor&) const = default;
};

enum class EdgeInsert { Inserted, Replaced };

/// Weighted bipolar argument graph. A plain value type: copies are
/// independent and const access is safe from any number of threads.
/// Arguments and edges keep insertion order so every traversal is
/// deterministic.
class ArgGraph {
  public:
    /// Idempotent. Throws ValidationError on a malformed identifier.
    void add_argument(std::string_view id);

    /// Records source -> target, replacing an existing edge on the same
    /// ordered pair (reported through the return value). Throws
    /// UnknownArgument for a missing endpoint and ValidationError for a
    /// zero weight.
    EdgeInsert add_edge(std::string_view source, std::string_view target, const Rational& weight);

    [[nodiscard]] bool contains(std::string_view id) const;
    [[nodiscard]] std::size_t index_of(std::string_view id) const; // throws UnknownArgument
    [[nodiscard]] std::size_t size() const { return arguments_.size(); }
    [[nodiscard]] const std::vector<ArgumentId>& arguments() const { return arguments_; }
    [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
    [[nodiscard]] std::optional<Rational> weight(std::string_view source, std::string_view target) const;

    /// In-neighbours with negative weight, in edge order.
    [[nodiscard]] std::vector<Neighbor> attackers(std::string_view id) const;
    /// In-neighbours with positive weight, in edge order.
    [[nodiscard]] std::vector<Neighbor> supporters(std::string_view id) const;
    /// Out-neighbours (targets of edges leaving `id`), in edge order.
    [[nodiscard]] std::vector<Neighbor> successors(std::string_view id) const;

    bool operator==(const ArgGraph& other) const {
        return arguments_ == other.arguments_ && edges_ == other.edges_;
    }

  private:
    std::vector<ArgumentId> arguments_;
    std::unordered_map<ArgumentId, std::size_t> index_;
    std::vector<Edge> edges_;
    std::unordered_map<std::string, std::size_t> edge_index_; // "source\0target" -> position
};

} // namespace peal
