#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "domlm/common.hpp"
#include "domlm/dom.hpp"

namespace domlm {

// Capacity limits for the XPath unit vocabularies. The tag capacity bounds
// how many distinct tags get their own id; subscripts above the ceiling are
// clipped rather than rejected.
constexpr int kTagVocabCapacity = 216;
constexpr int kSubsVocabSize = 1001;
constexpr int kMaxSubscript = kSubsVocabSize - 1;

// Dense tag -> id map with PAD and UNK reserved. Unknown tags always resolve
// to UNK, never an error.
class TagVocab {
public:
    static constexpr int kPad = 0;
    static constexpr int kUnk = 1;
    static constexpr int kReserved = 2;

    TagVocab() = default;

    int lookup(const std::string& tag) const {
        auto it = tag_to_id_.find(tag);
        return it == tag_to_id_.end() ? kUnk : it->second;
    }
    // Reverse lookup for real tags only; PAD/UNK have no surface form.
    const std::string* tag_of(int id) const;

    int size() const { return static_cast<int>(tag_to_id_.size()) + kReserved; }
    int capacity() const { return kTagVocabCapacity; }

    std::string to_json() const;          // {"tag": id, ...}
    static TagVocab from_json(const std::string& text);

    void add(const std::string& tag);  // assigns the next dense id

private:
    std::unordered_map<std::string, int> tag_to_id_;
    std::vector<std::string> id_to_tag_;  // index 0 = first real tag (id kReserved)
};

// Builds the tag vocabulary from a corpus: most frequent tags first up to
// capacity - 2, ties broken lexicographically.
TagVocab build_tag_vocab(const std::vector<DomTree>& trees, int capacity = kTagVocabCapacity);

// Subword interface. The reference splitter separates on whitespace and
// breaks punctuation into single-character tokens; the character tokenizer
// is the fallback that needs no learned vocabulary to be useful.
class Tokenizer {
public:
    virtual ~Tokenizer() = default;
    virtual std::vector<std::string> split(std::string_view text) const = 0;
    virtual std::string name() const = 0;
};

class WordTokenizer : public Tokenizer {
public:
    std::vector<std::string> split(std::string_view text) const override;
    std::string name() const override { return "word"; }
};

class CharTokenizer : public Tokenizer {
public:
    std::vector<std::string> split(std::string_view text) const override;
    std::string name() const override { return "char"; }
};

std::unique_ptr<Tokenizer> make_tokenizer(const std::string& name);

// Token-string vocabulary with the special tokens every sequence layout
// needs. YES/NO are the reserved answer tokens prepended to reading
// comprehension contexts.
class TextVocab {
public:
    static constexpr int kPad = 0;
    static constexpr int kUnk = 1;
    static constexpr int kCls = 2;
    static constexpr int kSep = 3;
    static constexpr int kMask = 4;
    static constexpr int kYes = 5;
    static constexpr int kNo = 6;
    static constexpr int kNumSpecial = 7;

    TextVocab();

    int lookup(const std::string& token) const {
        auto it = token_to_id_.find(token);
        return it == token_to_id_.end() ? kUnk : it->second;
    }
    const std::string& token_of(int id) const { return id_to_token_[static_cast<size_t>(id)]; }
    int size() const { return static_cast<int>(id_to_token_.size()); }

    int add(const std::string& token);

    std::string to_json() const;
    static TextVocab from_json(const std::string& text);

    static bool is_special(int id) { return id >= 0 && id < kNumSpecial; }

private:
    std::unordered_map<std::string, int> token_to_id_;
    std::vector<std::string> id_to_token_;
};

TextVocab build_text_vocab(const std::vector<DomTree>& trees, const Tokenizer& tokenizer,
                           int capacity);

}  // namespace domlm
