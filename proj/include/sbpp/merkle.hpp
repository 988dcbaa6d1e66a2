#pragma once

// Canonical binary Merkle tree over sorted drop ids.
//
// Leaves are SHA-256(LP("SBPP-LEAF", id)); interior nodes are
// SHA-256(LP("SBPP-NODE", left, right)). An odd node at the end of a level
// is paired with itself, so depth is ceil(log2 n).

#include <string>
#include <string_view>
#include <vector>

#include "sbpp/bytes.hpp"

namespace sbpp::merkle {

class MerkleError : public Error {
public:
    using Error::Error;
};

class NotAMember : public MerkleError {
public:
    using MerkleError::MerkleError;
};

/// Position of the sibling relative to the running hash.
enum class Side : std::uint8_t { Left = 0, Right = 1 };

struct PathStep {
    Hash32 sibling{};
    Side side = Side::Right;

    bool operator==(const PathStep&) const = default;
};

struct MerklePath {
    std::vector<PathStep> steps;

    std::size_t size() const { return steps.size(); }
    bool operator==(const MerklePath&) const = default;

    /// count (1 byte) then per step: side (1 byte) || sibling (32 bytes).
    Bytes serialize() const;
    static MerklePath parse(ByteView data);
};

Hash32 leaf_hash(std::string_view id);
Hash32 node_hash(ByteView left, ByteView right);

class MerkleTree {
public:
    /// Throws MerkleError on an empty, unsorted, or duplicate id list.
    static MerkleTree build(std::vector<std::string> sorted_ids);

    const Hash32& root() const { return levels_.back().front(); }
    std::size_t leaf_count() const { return ids_.size(); }
    std::size_t depth() const { return levels_.size() - 1; }
    const std::vector<std::string>& ids() const { return ids_; }

    /// Throws NotAMember when `id` is not a leaf.
    MerklePath prove(std::string_view id) const;

private:
    std::vector<std::string> ids_;
    std::vector<std::vector<Hash32>> levels_;
};

/// Folds leaf_hash(id) through `path`; true iff the result equals `root`.
bool verify_membership(const Hash32& root, std::string_view id, const MerklePath& path);

/// ceil(log2 n) for n >= 1 (0 for n == 1).
std::size_t expected_depth(std::size_t n);

}  // namespace sbpp::merkle
