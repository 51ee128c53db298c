#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "gwheavy/errors.hpp"
#include "gwheavy/tree.hpp"

namespace gw {

// "gwtree v1" file format:
//   # gwtree v1 n=<n> dist=<name> seed=<u64>
//   <preorder degrees, space separated>
// Writing then reading reproduces the file byte for byte.
struct GwTreeMeta {
    std::string dist = "custom";
    std::uint64_t seed = 0;
};

inline void write_gwtree(std::ostream& out, const OrderedTree& tree, const GwTreeMeta& meta) {
    out << "# gwtree v1 n=" << tree.n() << " dist=" << meta.dist << " seed=" << meta.seed << "\n";
    for (std::int64_t i = 0; i < tree.n(); ++i) {
        if (i > 0) out << ' ';
        out << tree.degrees[static_cast<std::size_t>(i)];
    }
    out << "\n";
}

inline std::pair<OrderedTree, GwTreeMeta> read_gwtree(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) throw DomainError("gwtree: missing header line");
    std::istringstream hs(header);
    std::string hash, magic, version, field;
    hs >> hash >> magic >> version;
    if (hash != "#" || magic != "gwtree" || version != "v1")
        throw DomainError("gwtree: bad header '" + header + "'");
    std::int64_t n = -1;
    GwTreeMeta meta;
    while (hs >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw DomainError("gwtree: bad header field '" + field + "'");
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "n")
            n = std::stoll(value);
        else if (key == "dist")
            meta.dist = value;
        else if (key == "seed")
            meta.seed = std::stoull(value);
        else
            throw DomainError("gwtree: unknown header field '" + key + "'");
    }
    if (n < 1) throw DomainError("gwtree: header lacks a valid n");

    std::vector<NodeIndex> degrees;
    degrees.reserve(static_cast<std::size_t>(n));
    std::string body;
    if (!std::getline(in, body)) throw DomainError("gwtree: missing degree line");
    std::istringstream bs(body);
    std::int64_t d;
    while (bs >> d) degrees.push_back(static_cast<NodeIndex>(d));
    if (static_cast<std::int64_t>(degrees.size()) != n)
        throw DomainError("gwtree: header says n=" + std::to_string(n) + " but found " +
                          std::to_string(degrees.size()) + " degrees");
    return {from_degrees(std::move(degrees)), meta};
}

}  // namespace gw
