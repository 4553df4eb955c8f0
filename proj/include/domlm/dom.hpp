#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "domlm/common.hpp"

namespace domlm {

using NodeId = int;
constexpr NodeId kNoNode = -1;

// One element node. Text is attached to its direct owner only; descendant
// text is reached through the tree. A text chunk's position counts the
// children that precede it in source order, so chunks and child subtrees
// interleave exactly as written.
struct DomNode {
    NodeId id = kNoNode;
    std::string tag;
    NodeId parent = kNoNode;
    std::vector<NodeId> children;
    std::vector<std::pair<std::string, int>> text_chunks;  // (text, position)
    bool is_title = false;
};

struct DomTree {
    std::vector<DomNode> nodes;  // arena indexed by NodeId
    NodeId root = kNoNode;
    std::optional<std::string> title_text;

    const DomNode& node(NodeId id) const {
        if (id < 0 || id >= static_cast<NodeId>(nodes.size()))
            fail(Errc::unknown_node, "node id " + std::to_string(id) + " not in tree");
        return nodes[static_cast<size_t>(id)];
    }
    int size() const { return static_cast<int>(nodes.size()); }
};

// Root-to-node path of (tag, subscript) units. Subscript is 0 when the node
// is the only child with its tag under its parent, else its 1-based ordinal
// among same-tag siblings.
struct XPathExpr {
    std::vector<std::pair<std::string, int>> units;

    int depth() const { return static_cast<int>(units.size()) - 1; }
    std::string render() const;
    bool operator==(const XPathExpr&) const = default;
};

// Directed relation of b relative to a. Ancestor/Descendant exclude the
// distance-1 cases, which Parent/Child own.
enum class NodeRelation {
    Self = 0,
    Parent = 1,
    Child = 2,
    Sibling = 3,
    Ancestor = 4,
    Descendant = 5,
    Others = 6,
};
constexpr int kNumRelations = 7;

const char* relation_name(NodeRelation r);

// Permissive HTML parse: lowercased tags, auto-closing for unclosed and
// misnested elements, void elements, raw-text script/style, entity decoding.
// Multiple top-level elements (or stray top-level text) get a synthetic
// html root. Throws Error(empty_document) when no element and no text can
// be produced.
DomTree parse_html(const std::string& source);

XPathExpr xpath_of(const DomTree& tree, NodeId node);

NodeRelation node_relation(const DomTree& tree, NodeId a, NodeId b);

// Default keep-list of text-bearing tags used by corpus cleaning.
const std::set<std::string>& default_keep_tags();

// Drops every node (with its subtree) whose tag is not kept. html, head,
// body and title are always retained, as is the root. Node ids are
// re-assigned densely; order is preserved.
DomTree clean_tree(const DomTree& tree, const std::set<std::string>& keep_tags);

struct ScoredPage {
    std::string source;
    std::optional<double> score;
};

// Keeps exactly the pages whose language score is strictly above 0.6.
// A record without a score raises Error(malformed_record).
std::vector<std::string> language_score_filter(const std::vector<ScoredPage>& pages,
                                               double threshold = 0.6);

// Concatenated text of a subtree in reading order (chunk/child interleaved).
std::string subtree_text(const DomTree& tree, NodeId node);

}  // namespace domlm
