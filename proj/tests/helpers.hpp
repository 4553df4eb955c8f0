#pragma once

// Shared test utilities: random document/tree generators and the
// independent brute-force oracles the unit and acceptance suites check
// the library against. Nothing here may call into the implementation
// paths under test (parser oracles parse on their own, the XPath oracle
// walks the tree by descent, etc.).

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "domlm/common.hpp"
#include "domlm/dom.hpp"

namespace testutil {

// ---------------------------------------------------------------------------
// Random well-formed document generation.
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& gen_tags() {
    static const std::vector<std::string> kTags = {"div", "span", "li", "a", "p", "ul", "td", "h1"};
    return kTags;
}

inline std::string random_word(domlm::Rng& rng) {
    int len = 1 + rng.uniform_int(6);
    std::string w;
    for (int i = 0; i < len; ++i) w.push_back(static_cast<char>('a' + rng.uniform_int(26)));
    return w;
}

struct GenNode {
    std::string tag;
    std::vector<GenNode> children;
    std::vector<std::pair<std::string, int>> chunks;  // (text, position)
};

inline GenNode random_gen_node(domlm::Rng& rng, int depth, int max_depth, int& budget) {
    GenNode n;
    n.tag = gen_tags()[static_cast<size_t>(rng.uniform_int(static_cast<int>(gen_tags().size())))];
    --budget;
    int n_children = depth >= max_depth || budget <= 0 ? 0 : rng.uniform_int(4);
    n_children = std::min(n_children, budget);
    for (int i = 0; i < n_children && budget > 0; ++i) {
        n.children.push_back(random_gen_node(rng, depth + 1, max_depth, budget));
    }
    int n_chunks = rng.uniform_int(3);
    for (int i = 0; i < n_chunks; ++i) {
        n.chunks.emplace_back(random_word(rng) + " " + random_word(rng),
                              rng.uniform_int(static_cast<int>(n.children.size()) + 1));
    }
    std::sort(n.chunks.begin(), n.chunks.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    return n;
}

inline void render_gen_node(const GenNode& n, std::string& out) {
    out += "<" + n.tag + ">";
    size_t ci = 0;
    for (size_t i = 0; i <= n.children.size(); ++i) {
        while (ci < n.chunks.size() && n.chunks[ci].second == static_cast<int>(i)) {
            out += n.chunks[ci].first;
            ++ci;
        }
        if (i < n.children.size()) render_gen_node(n.children[i], out);
    }
    out += "</" + n.tag + ">";
}

struct GenDoc {
    std::string html;
    GenNode root;
};

inline GenDoc random_document(domlm::Rng& rng, int max_nodes = 40, int max_depth = 6) {
    GenDoc doc;
    int budget = 2 + rng.uniform_int(max_nodes);
    doc.root.tag = "html";
    --budget;
    int top = 1 + rng.uniform_int(3);
    for (int i = 0; i < top && budget > 0; ++i) {
        doc.root.children.push_back(random_gen_node(rng, 1, max_depth, budget));
    }
    render_gen_node(doc.root, doc.html);
    return doc;
}

// ---------------------------------------------------------------------------
// Independent reference parser for well-formed input (oracle).
// ---------------------------------------------------------------------------

struct SimpleNode {
    std::string tag;
    int parent = -1;
    std::vector<int> children;
    std::vector<std::pair<std::string, int>> chunks;
};

// Assumes well-formed markup with no attributes, entities or self-closing
// tags, exactly what random_document() renders.
inline std::vector<SimpleNode> reference_parse(const std::string& html) {
    std::vector<SimpleNode> nodes;
    std::vector<int> stack;
    size_t i = 0;
    auto trim_collapse = [](const std::string& s) {
        std::string out;
        bool pending = false;
        for (char c : s) {
            if (c == ' ' || c == '\n' || c == '\t') {
                pending = !out.empty();
            } else {
                if (pending) out.push_back(' ');
                pending = false;
                out.push_back(c);
            }
        }
        return out;
    };
    while (i < html.size()) {
        if (html[i] == '<') {
            size_t close = html.find('>', i);
            std::string body = html.substr(i + 1, close - i - 1);
            if (!body.empty() && body[0] == '/') {
                stack.pop_back();
            } else {
                SimpleNode n;
                n.tag = body;
                n.parent = stack.empty() ? -1 : stack.back();
                int id = static_cast<int>(nodes.size());
                if (!stack.empty()) nodes[static_cast<size_t>(stack.back())].children.push_back(id);
                nodes.push_back(n);
                stack.push_back(id);
            }
            i = close + 1;
        } else {
            size_t start = i;
            while (i < html.size() && html[i] != '<') ++i;
            std::string text = trim_collapse(html.substr(start, i - start));
            if (!text.empty() && !stack.empty()) {
                SimpleNode& owner = nodes[static_cast<size_t>(stack.back())];
                owner.chunks.emplace_back(text, static_cast<int>(owner.children.size()));
            }
        }
    }
    return nodes;
}

// ---------------------------------------------------------------------------
// Brute-force XPath evaluator (oracle): descend from the root selecting the
// child that matches each (tag, subscript) unit.
// ---------------------------------------------------------------------------

// Parses a rendered "/tag[k]/tag/..." string back into units, independent of
// the library's own representation.
inline domlm::XPathExpr parse_xpath_string(const std::string& rendered) {
    domlm::XPathExpr xp;
    size_t i = 0;
    while (i < rendered.size()) {
        if (rendered[i] != '/') throw std::runtime_error("bad xpath string");
        ++i;
        std::string tag;
        while (i < rendered.size() && rendered[i] != '/' && rendered[i] != '[') tag.push_back(rendered[i++]);
        int sub = 0;
        if (i < rendered.size() && rendered[i] == '[') {
            ++i;
            while (i < rendered.size() && rendered[i] != ']') sub = sub * 10 + (rendered[i++] - '0');
            ++i;  // ']'
        }
        xp.units.emplace_back(tag, sub);
    }
    return xp;
}

inline std::optional<domlm::NodeId> eval_xpath(const domlm::DomTree& tree,
                                               const domlm::XPathExpr& xp) {
    if (xp.units.empty()) return std::nullopt;
    if (tree.node(tree.root).tag != xp.units[0].first) return std::nullopt;
    domlm::NodeId cur = tree.root;
    for (size_t level = 1; level < xp.units.size(); ++level) {
        const auto& [tag, sub] = xp.units[level];
        std::vector<domlm::NodeId> matches;
        for (domlm::NodeId c : tree.node(cur).children) {
            if (tree.node(c).tag == tag) matches.push_back(c);
        }
        if (sub == 0) {
            if (matches.size() != 1) return std::nullopt;
            cur = matches[0];
        } else {
            if (sub > static_cast<int>(matches.size()) || matches.size() < 2) return std::nullopt;
            cur = matches[static_cast<size_t>(sub - 1)];
        }
    }
    return cur;
}

// ---------------------------------------------------------------------------
// Path-walk relation classifier (oracle): label from full root paths.
// ---------------------------------------------------------------------------

inline std::vector<domlm::NodeId> root_path(const domlm::DomTree& tree, domlm::NodeId id) {
    std::vector<domlm::NodeId> path;
    for (domlm::NodeId cur = id; cur != domlm::kNoNode; cur = tree.node(cur).parent) {
        path.push_back(cur);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

inline domlm::NodeRelation relation_oracle(const domlm::DomTree& tree, domlm::NodeId a,
                                           domlm::NodeId b) {
    using domlm::NodeRelation;
    if (a == b) return NodeRelation::Self;
    std::vector<domlm::NodeId> pa = root_path(tree, a);
    std::vector<domlm::NodeId> pb = root_path(tree, b);
    auto contains = [](const std::vector<domlm::NodeId>& p, domlm::NodeId x) {
        return std::find(p.begin(), p.end(), x) != p.end();
    };
    if (contains(pa, b)) {
        return pa.size() - pb.size() == 1 ? NodeRelation::Parent : NodeRelation::Ancestor;
    }
    if (contains(pb, a)) {
        return pb.size() - pa.size() == 1 ? NodeRelation::Child : NodeRelation::Descendant;
    }
    if (pa.size() >= 2 && pb.size() >= 2 && pa[pa.size() - 2] == pb[pb.size() - 2]) {
        return NodeRelation::Sibling;
    }
    return NodeRelation::Others;
}

// ---------------------------------------------------------------------------
// Random DomTree built directly in the arena (no HTML round trip).
// ---------------------------------------------------------------------------

inline domlm::DomTree random_dom_tree(domlm::Rng& rng, int max_nodes = 60) {
    domlm::DomTree tree;
    int n = 2 + rng.uniform_int(max_nodes - 1);
    domlm::DomNode root;
    root.id = 0;
    root.tag = "html";
    tree.nodes.push_back(root);
    tree.root = 0;
    for (int i = 1; i < n; ++i) {
        domlm::DomNode node;
        node.id = i;
        node.tag = gen_tags()[static_cast<size_t>(rng.uniform_int(static_cast<int>(gen_tags().size())))];
        node.parent = rng.uniform_int(i);  // attach under any existing node
        if (rng.uniform_int(4) != 0) {
            node.text_chunks.emplace_back(random_word(rng), 0);
        }
        tree.nodes[static_cast<size_t>(node.parent)].children.push_back(i);
        tree.nodes.push_back(node);
    }
    return tree;
}

// The document of the worked XPath example: a two-item list where each item
// wraps a div holding two spans.
inline std::string fig3_html() {
    return "<html><head><title>Galaxy Store</title></head><body><div>"
           "<li><div><span>Add store to your home screen</span><span>Products</span></div></li>"
           "<li><div><span>Featured</span><span>Top picks</span></div></li>"
           "</div></body></html>";
}

}  // namespace testutil
