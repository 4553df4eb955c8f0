#include "domlm/dom.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <unordered_map>

namespace domlm {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':';
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_void_tag(const std::string& tag) {
    static const std::set<std::string> kVoid = {
        "area", "base",  "basefont", "br",    "col",   "embed", "frame", "hr",
        "img",  "input", "link",     "meta",  "param", "source", "track", "wbr",
    };
    return kVoid.count(tag) > 0;
}

bool is_raw_text_tag(const std::string& tag) {
    return tag == "script" || tag == "style";
}

// Minimal entity decoding: the common named entities plus numeric forms.
// Unknown entities pass through verbatim.
std::string decode_entities(std::string_view raw) {
    static const std::unordered_map<std::string, std::string> kNamed = {
        {"amp", "&"},  {"lt", "<"},    {"gt", ">"},   {"quot", "\""},
        {"apos", "'"}, {"nbsp", " "},  {"copy", "\xc2\xa9"}, {"ndash", "\xe2\x80\x93"},
        {"mdash", "\xe2\x80\x94"},
    };
    std::string out;
    out.reserve(raw.size());
    size_t i = 0;
    while (i < raw.size()) {
        if (raw[i] != '&') {
            out.push_back(raw[i++]);
            continue;
        }
        size_t semi = raw.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 12) {
            out.push_back(raw[i++]);
            continue;
        }
        std::string_view body = raw.substr(i + 1, semi - i - 1);
        if (!body.empty() && body[0] == '#') {
            long code = 0;
            bool ok = false;
            if (body.size() > 1 && (body[1] == 'x' || body[1] == 'X')) {
                ok = true;
                for (size_t k = 2; k < body.size(); ++k) {
                    if (!std::isxdigit(static_cast<unsigned char>(body[k]))) { ok = false; break; }
                    code = code * 16 + (std::isdigit(static_cast<unsigned char>(body[k]))
                                            ? body[k] - '0'
                                            : std::tolower(static_cast<unsigned char>(body[k])) - 'a' + 10);
                }
                ok = ok && body.size() > 2;
            } else {
                ok = body.size() > 1;
                for (size_t k = 1; k < body.size(); ++k) {
                    if (!std::isdigit(static_cast<unsigned char>(body[k]))) { ok = false; break; }
                    code = code * 10 + (body[k] - '0');
                }
            }
            if (ok && code > 0 && code < 0x110000) {
                // UTF-8 encode.
                uint32_t cp = static_cast<uint32_t>(code);
                if (cp < 0x80) {
                    out.push_back(static_cast<char>(cp));
                } else if (cp < 0x800) {
                    out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
                    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
                } else if (cp < 0x10000) {
                    out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
                    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
                    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
                } else {
                    out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
                    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
                    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
                    out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
                }
                i = semi + 1;
                continue;
            }
        } else {
            auto it = kNamed.find(std::string(body));
            if (it != kNamed.end()) {
                out += it->second;
                i = semi + 1;
                continue;
            }
        }
        out.push_back(raw[i++]);
    }
    return out;
}

// Collapses runs of whitespace to single spaces and trims the ends.
std::string normalize_text(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char c : raw) {
        if (is_space(c)) {
            pending_space = !out.empty();
        } else {
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.push_back(c);
        }
    }
    return out;
}

class Parser {
public:
    explicit Parser(const std::string& source) : src_(source) {}

    DomTree run() {
        // Synthetic top-level holder; becomes the real root or is replaced.
        open_synthetic_root();
        while (pos_ < src_.size()) {
            if (src_[pos_] == '<') {
                handle_markup();
            } else {
                size_t start = pos_;
                while (pos_ < src_.size() && src_[pos_] != '<') ++pos_;
                append_text(src_.substr(start, pos_ - start));
            }
        }
        return finish();
    }

private:
    const std::string& src_;
    size_t pos_ = 0;
    DomTree tree_;
    std::vector<NodeId> stack_;

    void open_synthetic_root() {
        DomNode holder;
        holder.id = 0;
        holder.tag = "#document";
        tree_.nodes.push_back(holder);
        stack_.push_back(0);
    }

    DomNode& node(NodeId id) { return tree_.nodes[static_cast<size_t>(id)]; }

    NodeId open_element(const std::string& tag) {
        NodeId id = static_cast<NodeId>(tree_.nodes.size());
        DomNode n;
        n.id = id;
        n.tag = tag;
        n.parent = stack_.back();
        node(stack_.back()).children.push_back(id);
        tree_.nodes.push_back(std::move(n));
        stack_.push_back(id);
        return id;
    }

    void close_element() {
        if (stack_.size() > 1) stack_.pop_back();
    }

    void append_text(std::string_view raw) {
        std::string text = normalize_text(decode_entities(raw));
        if (text.empty()) return;
        DomNode& owner = node(stack_.back());
        owner.text_chunks.emplace_back(std::move(text), static_cast<int>(owner.children.size()));
    }

    void handle_markup() {
        // pos_ points at '<'.
        if (pos_ + 1 >= src_.size()) {
            append_text(src_.substr(pos_, 1));
            ++pos_;
            return;
        }
        char c = src_[pos_ + 1];
        if (c == '!') {
            skip_declaration();
        } else if (c == '?') {
            skip_until('>');
        } else if (c == '/') {
            handle_close_tag();
        } else if (std::isalpha(static_cast<unsigned char>(c))) {
            handle_open_tag();
        } else {
            // Stray '<' treated as text.
            append_text("<");
            ++pos_;
        }
    }

    void skip_until(char terminator) {
        while (pos_ < src_.size() && src_[pos_] != terminator) ++pos_;
        if (pos_ < src_.size()) ++pos_;
    }

    void skip_declaration() {
        if (src_.compare(pos_, 4, "<!--") == 0) {
            size_t end = src_.find("-->", pos_ + 4);
            pos_ = end == std::string::npos ? src_.size() : end + 3;
            return;
        }
        if (src_.compare(pos_, 9, "<![CDATA[") == 0) {
            size_t end = src_.find("]]>", pos_ + 9);
            pos_ = end == std::string::npos ? src_.size() : end + 3;
            return;
        }
        skip_until('>');  // doctype and friends
    }

    std::string read_tag_name() {
        size_t start = pos_;
        while (pos_ < src_.size() && is_name_char(src_[pos_])) ++pos_;
        return to_lower(std::string_view(src_).substr(start, pos_ - start));
    }

    // Skips attributes up to (and including) the closing '>' if present.
    // Returns true when the tag is self-closing ("/>").
    bool skip_attributes() {
        bool self_closing = false;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '>') {
                ++pos_;
                return self_closing;
            }
            if (c == '/') {
                self_closing = true;
                ++pos_;
                continue;
            }
            if (c == '"' || c == '\'') {
                char quote = c;
                ++pos_;
                while (pos_ < src_.size() && src_[pos_] != quote) ++pos_;
                if (pos_ < src_.size()) ++pos_;
                self_closing = false;
                continue;
            }
            self_closing = false;
            ++pos_;
        }
        return self_closing;  // unterminated tag at EOF
    }

    void handle_open_tag() {
        ++pos_;  // '<'
        std::string tag = read_tag_name();
        bool self_closing = skip_attributes();
        if (tag.empty()) return;
        NodeId id = open_element(tag);
        if (self_closing || is_void_tag(tag)) {
            close_element();
            return;
        }
        if (is_raw_text_tag(tag)) {
            consume_raw_text(tag, id);
        }
    }

    // script/style content is raw: everything up to the matching close tag.
    void consume_raw_text(const std::string& tag, NodeId id) {
        std::string needle = "</" + tag;
        size_t end = pos_;
        while (true) {
            end = src_.find('<', end);
            if (end == std::string::npos) {
                end = src_.size();
                break;
            }
            if (src_.size() - end >= needle.size() &&
                to_lower(std::string_view(src_).substr(end, needle.size())) == needle) {
                break;
            }
            ++end;
        }
        std::string text = normalize_text(std::string_view(src_).substr(pos_, end - pos_));
        if (!text.empty()) node(id).text_chunks.emplace_back(std::move(text), 0);
        pos_ = end;
        if (pos_ < src_.size()) {
            skip_until('>');  // the close tag itself
        }
        close_element();
    }

    void handle_close_tag() {
        pos_ += 2;  // "</"
        std::string tag = read_tag_name();
        skip_until('>');
        if (tag.empty()) return;
        // Auto-close intervening elements if an ancestor matches; otherwise
        // the close tag is stray and ignored.
        for (size_t i = stack_.size(); i-- > 1;) {
            if (node(stack_[i]).tag == tag) {
                stack_.resize(i);
                return;
            }
        }
    }

    DomTree finish() {
        DomNode& holder = tree_.nodes[0];
        bool has_text = !holder.text_chunks.empty();
        if (holder.children.empty() && !has_text) {
            fail(Errc::empty_document, "no element or text content in document");
        }
        if (holder.children.size() == 1 && !has_text) {
            promote_single_root(holder.children[0]);
        } else {
            holder.tag = "html";  // synthetic root for fragments
            tree_.root = 0;
        }
        populate_title();
        return std::move(tree_);
    }

    // Drops the #document holder, re-indexing so the single element child
    // becomes node 0.
    void promote_single_root(NodeId old_root) {
        DomTree out;
        std::vector<NodeId> remap(tree_.nodes.size(), kNoNode);
        std::vector<NodeId> order;
        order.push_back(old_root);
        for (size_t i = 0; i < order.size(); ++i) {
            for (NodeId c : node(order[i]).children) order.push_back(c);
        }
        for (size_t i = 0; i < order.size(); ++i) remap[static_cast<size_t>(order[i])] = static_cast<NodeId>(i);
        out.nodes.resize(order.size());
        for (size_t i = 0; i < order.size(); ++i) {
            const DomNode& src = node(order[i]);
            DomNode dst;
            dst.id = static_cast<NodeId>(i);
            dst.tag = src.tag;
            dst.parent = src.parent == 0 || src.parent == kNoNode ? kNoNode : remap[static_cast<size_t>(src.parent)];
            if (order[i] == old_root) dst.parent = kNoNode;
            for (NodeId c : src.children) dst.children.push_back(remap[static_cast<size_t>(c)]);
            dst.text_chunks = src.text_chunks;
            out.nodes[i] = std::move(dst);
        }
        out.root = 0;
        tree_ = std::move(out);
    }

    // Marks the first <title> in document order.
    void populate_title() {
        std::vector<NodeId> walk{tree_.root};
        while (!walk.empty()) {
            NodeId id = walk.back();
            walk.pop_back();
            DomNode& n = tree_.nodes[static_cast<size_t>(id)];
            if (n.tag == "title") {
                n.is_title = true;
                std::string text;
                for (const auto& [chunk, pos] : n.text_chunks) {
                    if (!text.empty()) text += ' ';
                    text += chunk;
                }
                tree_.title_text = text;
                return;
            }
            for (size_t i = n.children.size(); i-- > 0;) walk.push_back(n.children[i]);
        }
    }
};

}  // namespace

std::string XPathExpr::render() const {
    std::string out;
    for (const auto& [tag, sub] : units) {
        out += '/';
        out += tag;
        if (sub != 0) {
            out += '[';
            out += std::to_string(sub);
            out += ']';
        }
    }
    return out;
}

const char* relation_name(NodeRelation r) {
    switch (r) {
        case NodeRelation::Self: return "self";
        case NodeRelation::Parent: return "parent";
        case NodeRelation::Child: return "child";
        case NodeRelation::Sibling: return "sibling";
        case NodeRelation::Ancestor: return "ancestor";
        case NodeRelation::Descendant: return "descendant";
        case NodeRelation::Others: return "others";
    }
    return "?";
}

DomTree parse_html(const std::string& source) {
    return Parser(source).run();
}

XPathExpr xpath_of(const DomTree& tree, NodeId id) {
    const DomNode* n = &tree.node(id);
    std::vector<NodeId> path;
    while (true) {
        path.push_back(n->id);
        if (n->parent == kNoNode) break;
        n = &tree.node(n->parent);
    }
    std::reverse(path.begin(), path.end());

    XPathExpr xp;
    xp.units.reserve(path.size());
    for (NodeId cur : path) {
        const DomNode& here = tree.node(cur);
        int subscript = 0;
        if (here.parent != kNoNode) {
            const DomNode& par = tree.node(here.parent);
            int same_tag = 0;
            int ordinal = 0;
            for (NodeId sib : par.children) {
                if (tree.node(sib).tag == here.tag) {
                    ++same_tag;
                    if (sib == cur) ordinal = same_tag;
                }
            }
            if (same_tag > 1) subscript = ordinal;
        }
        xp.units.emplace_back(here.tag, subscript);
    }
    return xp;
}

NodeRelation node_relation(const DomTree& tree, NodeId a, NodeId b) {
    const DomNode& na = tree.node(a);
    const DomNode& nb = tree.node(b);
    if (a == b) return NodeRelation::Self;
    if (na.parent == b) return NodeRelation::Parent;
    if (nb.parent == a) return NodeRelation::Child;
    if (na.parent != kNoNode && na.parent == nb.parent) return NodeRelation::Sibling;
    for (NodeId up = na.parent; up != kNoNode; up = tree.node(up).parent) {
        if (up == b) return NodeRelation::Ancestor;
    }
    for (NodeId up = nb.parent; up != kNoNode; up = tree.node(up).parent) {
        if (up == a) return NodeRelation::Descendant;
    }
    return NodeRelation::Others;
}

const std::set<std::string>& default_keep_tags() {
    static const std::set<std::string> kKeep = {
        "html",   "head",    "body",    "title",   "div",     "span",    "li",
        "a",      "p",       "h1",      "h2",      "h3",      "h4",      "h5",
        "h6",     "ul",      "ol",      "dl",      "dt",      "dd",      "table",
        "thead",  "tbody",   "tfoot",   "tr",      "td",      "th",      "caption",
        "label",  "button",  "strong",  "em",      "b",       "i",       "u",
        "s",      "small",   "big",     "sub",     "sup",     "section", "article",
        "header", "footer",  "nav",     "aside",   "main",    "figure",  "figcaption",
        "blockquote", "pre", "code",    "form",    "select",  "option",  "textarea",
        "time",   "address", "summary", "details", "mark",    "cite",    "q",
        "abbr",   "del",     "ins",     "font",    "center",  "legend",  "fieldset",
    };
    return kKeep;
}

DomTree clean_tree(const DomTree& tree, const std::set<std::string>& keep_tags) {
    static const std::set<std::string> kImplicit = {"html", "head", "body", "title"};
    auto kept = [&](NodeId id) {
        const DomNode& n = tree.node(id);
        return id == tree.root || keep_tags.count(n.tag) > 0 || kImplicit.count(n.tag) > 0;
    };

    DomTree out;
    out.title_text = tree.title_text;
    std::vector<NodeId> remap(tree.nodes.size(), kNoNode);

    // Pre-order copy of surviving nodes; a dropped node drops its subtree.
    struct Item { NodeId src; NodeId dst_parent; };
    std::vector<Item> work;
    work.push_back({tree.root, kNoNode});
    while (!work.empty()) {
        Item item = work.back();
        work.pop_back();
        const DomNode& src = tree.node(item.src);
        NodeId dst_id = static_cast<NodeId>(out.nodes.size());
        DomNode dst;
        dst.id = dst_id;
        dst.tag = src.tag;
        dst.parent = item.dst_parent;
        dst.is_title = src.is_title;
        out.nodes.push_back(dst);
        remap[static_cast<size_t>(item.src)] = dst_id;
        if (item.dst_parent != kNoNode) {
            out.nodes[static_cast<size_t>(item.dst_parent)].children.push_back(dst_id);
        }
        // Keep source order with a LIFO work list: push children reversed.
        std::vector<NodeId> surviving;
        for (NodeId c : src.children) {
            if (kept(c)) surviving.push_back(c);
        }
        for (size_t i = surviving.size(); i-- > 0;) {
            work.push_back({surviving[i], dst_id});
        }
        // Text chunk positions re-count surviving children only.
        std::vector<int> child_shift(src.children.size() + 1, 0);
        int live = 0;
        for (size_t i = 0; i < src.children.size(); ++i) {
            child_shift[i] = live;
            if (kept(src.children[i])) ++live;
        }
        child_shift[src.children.size()] = live;
        for (const auto& [text, posn] : src.text_chunks) {
            int clamped = std::min<int>(posn, static_cast<int>(src.children.size()));
            out.nodes[static_cast<size_t>(dst_id)].text_chunks.emplace_back(text, child_shift[static_cast<size_t>(clamped)]);
        }
    }
    out.root = 0;
    return out;
}

std::vector<std::string> language_score_filter(const std::vector<ScoredPage>& pages,
                                               double threshold) {
    std::vector<std::string> kept;
    for (const ScoredPage& p : pages) {
        if (!p.score.has_value()) {
            fail(Errc::malformed_record, "page record missing language score");
        }
        if (*p.score > threshold) kept.push_back(p.source);
    }
    return kept;
}

namespace {
void collect_text(const DomTree& tree, NodeId id, std::string& out) {
    const DomNode& n = tree.node(id);
    size_t chunk_idx = 0;
    auto emit_chunks_at = [&](int position) {
        while (chunk_idx < n.text_chunks.size() && n.text_chunks[chunk_idx].second == position) {
            if (!out.empty()) out += ' ';
            out += n.text_chunks[chunk_idx].first;
            ++chunk_idx;
        }
    };
    for (size_t i = 0; i <= n.children.size(); ++i) {
        emit_chunks_at(static_cast<int>(i));
        if (i < n.children.size()) collect_text(tree, n.children[i], out);
    }
}
}  // namespace

std::string subtree_text(const DomTree& tree, NodeId node) {
    std::string out;
    collect_text(tree, node, out);
    return out;
}

}  // namespace domlm
