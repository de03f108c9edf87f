// Copyright (c) PEAL contributors.
// SPDX-License-Identifier: Apache-2.0
#include "peal/arg_graph.hpp"

#include <algorithm>
#include <cctype>

#include "peal/errors.hpp"

namespace peal {

namespace {

std::string edge_key(std::string_view source, std::string_view target) {
    std::string key(source);
    key.push_back('\0');
    key.append(target);
    return key;
}

} // namespace

bool is_valid_argument_id(std::string_view id) {
    return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

void ArgGraph::add_argument(std::string_view id) {
    if (!is_valid_argument_id(id)) {
        throw ValidationError("invalid argument identifier '" + std::string(id) + "'");
    }
    if (contains(id)) {
        return;
    }
    index_.emplace(std::string(id), arguments_.size());
    arguments_.emplace_back(id);
}

EdgeInsert ArgGraph::add_edge(std::string_view source, std::string_view target, const Rational& weight) {
    if (!contains(source)) {
        throw UnknownArgument(std::string(source));
    }
    if (!contains(target)) {
        throw UnknownArgument(std::string(target));
    }
    if (weight == 0) {
        throw ValidationError("edge " + std::string(source) + " -> " + std::string(target) +
                              " has weight 0; attack needs w < 0 and support w > 0");
    }
    auto key = edge_key(source, target);
    if (const auto it = edge_index_.find(key); it != edge_index_.end()) {
        edges_[it->second].weight = weight;
        return EdgeInsert::Replaced;
    }
    edge_index_.emplace(std::move(key), edges_.size());
    edges_.push_back(Edge{std::string(source), std::string(target), weight});
    return EdgeInsert::Inserted;
}

bool ArgGraph::contains(std::string_view id) const { return index_.find(std::string(id)) != index_.end(); }

std::size_t ArgGraph::index_of(std::string_view id) const {
    const auto it = index_.find(std::string(id));
    if (it == index_.end()) {
        throw UnknownArgument(std::string(id));
    }
    return it->second;
}

std::optional<Rational> ArgGraph::weight(std::string_view source, std::string_view target) const {
    const auto it = edge_index_.find(edge_key(source, target));
    if (it == edge_index_.end()) {
        return std::nullopt;
    }
    return edges_[it->second].weight;
}

std::vector<Neighbor> ArgGraph::attackers(std::string_view id) const {
    (void)index_of(id);
    std::vector<Neighbor> out;
    for (const auto& e : edges_) {
        if (e.target == id && e.is_attack()) {
            out.push_back({e.source, e.weight});
        }
    }
    return out;
}

std::vector<Neighbor> ArgGraph::supporters(std::string_view id) const {
    (void)index_of(id);
    std::vector<Neighbor> out;
    for (const auto& e : edges_) {
        if (e.target == id && e.is_support()) {
            out.push_back({e.source, e.weight});
        }
    }
    return out;
}

std::vector<Neighbor> ArgGraph::successors(std::string_view id) const {
    (void)index_of(id);
    std::vector<Neighbor> out;
    for (const auto& e : edges_) {
        if (e.source == id) {
            out.push_back({e.target, e.weight});
        }
    }
    return out;
}

} // namespace peal
