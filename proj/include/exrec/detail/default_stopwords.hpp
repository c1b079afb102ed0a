#pragma once

#include <array>
#include <string_view>

namespace exrec {

// Built-in copy of data/stopwords_en.txt (version 1). Keep the two in sync;
// a unit test compares them.
inline constexpr std::array<std::string_view, 189> kDefaultStopwords = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your",
    "yours", "yourself", "yourselves", "he", "him", "his", "himself", "she", "her", "hers",
    "herself", "it", "its", "itself", "they", "them", "their", "theirs", "themselves", "what",
    "which", "who", "whom", "this", "that", "these", "those", "am", "is", "are",
    "was", "were", "be", "been", "being", "have", "has", "had", "having", "do",
    "does", "did", "doing", "an", "the", "and", "but", "if", "or", "because",
    "as", "until", "while", "of", "at", "by", "for", "with", "about", "against",
    "between", "into", "through", "during", "before", "after", "above", "below", "to", "from",
    "up", "down", "in", "out", "on", "off", "over", "under", "again", "further",
    "then", "once", "here", "there", "when", "where", "why", "how", "all", "any",
    "both", "each", "few", "more", "most", "other", "some", "such", "no", "nor",
    "not", "only", "own", "same", "so", "than", "too", "very", "can", "will",
    "just", "don", "should", "now", "ll", "re", "ve", "ain", "aren", "couldn",
    "didn", "doesn", "hadn", "hasn", "haven", "isn", "ma", "mightn", "mustn", "needn",
    "shan", "shouldn", "wasn", "weren", "won", "wouldn", "also", "however", "may", "might",
    "must", "would", "could", "shall", "via", "within", "without", "among", "upon", "thus",
    "therefore", "whether", "yet", "us", "either", "neither", "every", "another", "since", "although",
    "though", "unless", "whereas", "hence", "rather", "almost", "already", "always", "often", "many",
    "much", "well", "one", "two", "three", "several", "using", "based", "new",
};

}  // namespace exrec
