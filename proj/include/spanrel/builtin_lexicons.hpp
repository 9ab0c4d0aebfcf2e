#pragma once

// Built-in lexicons. resources/lexicons/*.txt carry the same entries one per
// line; tests keep the two in sync.

#include <array>
#include <string_view>

namespace spanrel::builtin {

inline constexpr std::array<std::string_view, 31> kNegationCues{{
    "absent", "cannot", "denied", "denies", "deny", "free of", "lack of",
    "lacking", "lacks", "neg", "negative", "neither", "never", "no",
    "no evidence", "no signs", "no symptoms", "nobody", "non", "none", "nor",
    "not", "nothing", "nowhere", "rule out", "ruled out", "rules out", "unable",
    "unlikely", "unremarkable", "without",
}};

inline constexpr std::array<std::string_view, 47> kHedgeCues{{
    "about", "appeared", "appears", "approximate", "approximately", "around",
    "await", "awaiting", "concern", "concerned", "consider", "considered",
    "could", "differential", "equivocal", "estimated", "if", "likely", "may",
    "might", "or", "pending", "perhaps", "possible", "possibly", "potential",
    "potentially", "presumed", "presumptive", "probable", "probably",
    "questionable", "seems", "seemed", "should", "suggested", "suggests",
    "suspect", "suspected", "suspicion", "tentative", "uncertain", "unclear",
    "unlikely", "versus", "vs", "whether",
}};

// Duplicated "n't" rows of the source table collapse to one entry.
inline constexpr std::array<std::string_view, 313> kStopwords{{
    "a", "about", "above", "across", "after", "afterwards", "again", "against",
    "all", "almost", "alone", "along", "already", "also", "although", "always",
    "am", "among", "amongst", "amount", "an", "and", "another", "any", "anyhow",
    "anyone", "anything", "anyway", "anywhere", "are", "around", "as", "at",
    "back", "be", "became", "because", "become", "becomes", "becoming", "been",
    "before", "beforehand", "behind", "being", "below", "beside", "besides",
    "between", "beyond", "both", "bottom", "but", "by", "ca", "call", "can",
    "cannot", "could", "did", "do", "does", "doing", "done", "down", "due",
    "during", "each", "eight", "either", "eleven", "else", "elsewhere", "empty",
    "enough", "even", "ever", "every", "everyone", "everything", "everywhere",
    "except", "few", "fifteen", "fifty", "first", "five", "for", "former",
    "formerly", "forty", "four", "from", "front", "full", "further", "get",
    "give", "go", "had", "has", "have", "he", "hence", "her", "here",
    "hereafter", "hereby", "herein", "hereupon", "hers", "herself", "him",
    "himself", "his", "how", "however", "hundred", "i", "if", "in", "indeed",
    "into", "is", "it", "its", "itself", "just", "keep", "last", "latter",
    "latterly", "least", "less", "made", "make", "many", "may", "me",
    "meanwhile", "might", "mine", "more", "moreover", "most", "mostly", "move",
    "much", "must", "my", "myself", "n't", "name", "namely", "neither", "never",
    "nevertheless", "next", "nine", "no", "nobody", "none", "noone", "nor",
    "not", "nothing", "now", "nowhere", "of", "off", "often", "on", "once",
    "one", "only", "onto", "or", "other", "others", "otherwise", "our", "ours",
    "ourselves", "out", "over", "own", "part", "per", "perhaps", "please",
    "put", "quite", "rather", "re", "really", "regarding", "s", "same", "say",
    "see", "seem", "seemed", "seeming", "seems", "serious", "several", "she",
    "should", "show", "side", "since", "six", "sixty", "so", "some", "somehow",
    "someone", "something", "sometime", "sometimes", "somewhere", "still",
    "such", "take", "ten", "than", "that", "the", "their", "them", "themselves",
    "then", "thence", "there", "thereafter", "thereby", "therefore", "therein",
    "thereupon", "these", "they", "third", "this", "those", "though", "three",
    "through", "throughout", "thru", "thus", "to", "together", "too", "top",
    "toward", "towards", "twelve", "twenty", "two", "under", "until", "up",
    "unless", "upon", "us", "used", "using", "various", "very", "via", "was",
    "we", "well", "were", "what", "whatever", "when", "whence", "whenever",
    "where", "whereafter", "whereas", "whereby", "wherein", "whereupon",
    "wherever", "whether", "which", "while", "whither", "who", "whoever",
    "whole", "whom", "whose", "why", "will", "with", "within", "without",
    "would", "yet", "you", "your", "yours", "yourself", "yourselves", "'d",
    "'ll", "'m", "'re", "'s", "'ve",
}};

// Personal pronouns. "theirs" is the one entry absent from kStopwords.
inline constexpr std::array<std::string_view, 31> kPronouns{{
    "i", "you", "he", "she", "it", "we", "they", "me", "him", "her", "us",
    "them", "my", "your", "his", "its", "our", "their", "mine", "yours", "hers",
    "ours", "theirs", "myself", "yourself", "himself", "herself", "itself",
    "ourselves", "yourselves", "themselves",
}};

}  // namespace spanrel::builtin
