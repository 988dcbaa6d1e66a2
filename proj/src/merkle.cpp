#include "sbpp/merkle.hpp"

#include <algorithm>

#include "sbpp/canon.hpp"

namespace sbpp::merkle {

Bytes MerklePath::serialize() const {
    if (steps.size() > 255) throw EncodingError("merkle path longer than 255 steps");
    Bytes out;
    out.reserve(1 + steps.size() * (1 + kHashSize));
    out.push_back(static_cast<std::uint8_t>(steps.size()));
    for (const auto& s : steps) {
        out.push_back(static_cast<std::uint8_t>(s.side));
        out.insert(out.end(), s.sibling.begin(), s.sibling.end());
    }
    return out;
}

MerklePath MerklePath::parse(ByteView data) {
    if (data.empty()) throw ParseError("merkle path: missing step count");
    std::size_t count = data[0];
    if (data.size() != 1 + count * (1 + kHashSize)) {
        throw ParseError("merkle path: length does not match step count");
    }
    MerklePath path;
    path.steps.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint8_t* p = data.data() + 1 + i * (1 + kHashSize);
        if (p[0] > 1) throw ParseError("merkle path: invalid side byte");
        PathStep step;
        step.side = static_cast<Side>(p[0]);
        std::copy(p + 1, p + 1 + kHashSize, step.sibling.begin());
        path.steps.push_back(step);
    }
    return path;
}

Hash32 leaf_hash(std::string_view id) {
    return canon::sha256(canon::Message{canon::kDomainLeaf, id}.encode());
}

Hash32 node_hash(ByteView left, ByteView right) {
    if (left.size() != kHashSize || right.size() != kHashSize) {
        throw MerkleError("node inputs must be 32 bytes");
    }
    return canon::sha256(canon::Message{canon::kDomainNode}.add(left).add(right).encode());
}

MerkleTree MerkleTree::build(std::vector<std::string> sorted_ids) {
    if (sorted_ids.empty()) throw MerkleError("cannot build a tree over an empty result set");
    for (std::size_t i = 1; i < sorted_ids.size(); ++i) {
        if (!(sorted_ids[i - 1] < sorted_ids[i])) {
            throw MerkleError("ids must be sorted ascending and unique");
        }
    }
    MerkleTree tree;
    tree.ids_ = std::move(sorted_ids);
    std::vector<Hash32> level;
    level.reserve(tree.ids_.size());
    for (const auto& id : tree.ids_) level.push_back(leaf_hash(id));
    tree.levels_.push_back(std::move(level));
    while (tree.levels_.back().size() > 1) {
        const auto& cur = tree.levels_.back();
        std::vector<Hash32> next;
        next.reserve((cur.size() + 1) / 2);
        for (std::size_t i = 0; i < cur.size(); i += 2) {
            const Hash32& right = i + 1 < cur.size() ? cur[i + 1] : cur[i];
            next.push_back(node_hash(cur[i], right));
        }
        tree.levels_.push_back(std::move(next));
    }
    return tree;
}

MerklePath MerkleTree::prove(std::string_view id) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) throw NotAMember("not a member: " + std::string(id));
    std::size_t index = static_cast<std::size_t>(it - ids_.begin());
    MerklePath path;
    for (std::size_t lvl = 0; lvl + 1 < levels_.size(); ++lvl) {
        const auto& cur = levels_[lvl];
        if (index % 2 == 0) {
            const Hash32& sib = index + 1 < cur.size() ? cur[index + 1] : cur[index];
            path.steps.push_back({sib, Side::Right});
        } else {
            path.steps.push_back({cur[index - 1], Side::Left});
        }
        index /= 2;
    }
    return path;
}

bool verify_membership(const Hash32& root, std::string_view id, const MerklePath& path) {
    Hash32 acc = leaf_hash(id);
    for (const auto& step : path.steps) {
        acc = step.side == Side::Right ? node_hash(acc, step.sibling) : node_hash(step.sibling, acc);
    }
    return acc == root;
}

std::size_t expected_depth(std::size_t n) {
    std::size_t d = 0;
    while ((std::size_t{1} << d) < n) ++d;
    return d;
}

}  // namespace sbpp::merkle
