#!/usr/bin/env python3
"""Writes the bundled demo treebank and the CoNLL-U test fixtures.

    python3 tools/make_demo_treebank.py [repo_root]

Output is deterministic; rerunning leaves the files unchanged.
"""
import random
import sys
from pathlib import Path

# Hand-annotated clauses: (sent_id, expected category, text, tokens).
# Tokens are (form, lemma, upos, head, deprel).
ANNOTATED_EXAMPLES = [
("ex01","Intransitive","One little boy stands up.",[
 ("One","one","NUM",3,"nummod"),("little","little","ADJ",3,"amod"),("boy","boy","NOUN",4,"nsubj"),
 ("stands","stand","VERB",0,"root"),("up","up","ADP",4,"compound:prt"),(".",".","PUNCT",4,"punct")]),
("ex02","Intransitive","I literally just pretty much woke up and left this morning.",[
 ("I","I","PRON",6,"nsubj"),("literally","literally","ADV",6,"advmod"),("just","just","ADV",6,"advmod"),
 ("pretty","pretty","ADV",5,"advmod"),("much","much","ADV",6,"advmod"),("woke","wake","VERB",0,"root"),
 ("up","up","ADP",6,"compound:prt"),("and","and","CCONJ",9,"cc"),("left","leave","VERB",6,"conj"),
 ("this","this","DET",11,"det"),("morning","morning","NOUN",9,"obl:tmod"),(".",".","PUNCT",6,"punct")]),
("ex03","TransitiveNP","Olivia played records with the living-room windows wide open.",[
 ("Olivia","Olivia","PROPN",2,"nsubj"),("played","play","VERB",0,"root"),("records","record","NOUN",2,"obj"),
 ("with","with","ADP",7,"case"),("the","the","DET",7,"det"),("living-room","living-room","NOUN",7,"compound"),
 ("windows","window","NOUN",2,"obl"),("wide","wide","ADV",9,"advmod"),("open","open","ADJ",7,"amod"),
 (".",".","PUNCT",2,"punct")]),
("ex04","TransitiveNP","They just built a hotel in Syria.",[
 ("They","they","PRON",3,"nsubj"),("just","just","ADV",3,"advmod"),("built","build","VERB",0,"root"),
 ("a","a","DET",5,"det"),("hotel","hotel","NOUN",3,"obj"),("in","in","ADP",7,"case"),
 ("Syria","Syria","PROPN",3,"obl"),(".",".","PUNCT",3,"punct")]),
("ex05","TransitiveC","The Great Powers realized they had to change their decision.",[
 ("The","the","DET",3,"det"),("Great","Great","PROPN",3,"compound"),("Powers","Powers","PROPN",4,"nsubj"),
 ("realized","realize","VERB",0,"root"),("they","they","PRON",6,"nsubj"),("had","have","VERB",4,"ccomp"),
 ("to","to","PART",8,"mark"),("change","change","VERB",6,"xcomp"),("their","their","PRON",10,"nmod:poss"),
 ("decision","decision","NOUN",8,"obj"),(".",".","PUNCT",4,"punct")]),
("ex06","TransitiveC","Quinn realized that he should be going.",[
 ("Quinn","Quinn","PROPN",2,"nsubj"),("realized","realize","VERB",0,"root"),("that","that","SCONJ",7,"mark"),
 ("he","he","PRON",7,"nsubj"),("should","should","AUX",7,"aux"),("be","be","AUX",7,"aux"),
 ("going","go","VERB",2,"ccomp"),(".",".","PUNCT",2,"punct")]),
("ex07","Passive","Without a valid visa, boarding will be denied by the airline.",[
 ("Without","without","ADP",4,"case"),("a","a","DET",4,"det"),("valid","valid","ADJ",4,"amod"),
 ("visa","visa","NOUN",9,"obl"),(",",",","PUNCT",9,"punct"),("boarding","boarding","NOUN",9,"nsubj:pass"),
 ("will","will","AUX",9,"aux"),("be","be","AUX",9,"aux:pass"),("denied","deny","VERB",0,"root"),
 ("by","by","ADP",12,"case"),("the","the","DET",12,"det"),("airline","airline","NOUN",9,"obl:agent"),
 (".",".","PUNCT",9,"punct")]),
("ex08","Passive","Tropical cyclones are sustained by a form of energy called latent heat.",[
 ("Tropical","tropical","ADJ",2,"amod"),("cyclones","cyclone","NOUN",4,"nsubj:pass"),("are","be","AUX",4,"aux:pass"),
 ("sustained","sustain","VERB",0,"root"),("by","by","ADP",7,"case"),("a","a","DET",7,"det"),
 ("form","form","NOUN",4,"obl:agent"),("of","of","ADP",9,"case"),("energy","energy","NOUN",7,"nmod"),
 ("called","call","VERB",9,"acl"),("latent","latent","ADJ",12,"amod"),("heat","heat","NOUN",10,"xcomp"),
 (".",".","PUNCT",4,"punct")]),
("ex09","DoubleObject","Silent, I give his case some thought.",[
 ("Silent","silent","ADJ",4,"advcl"),(",",",","PUNCT",1,"punct"),("I","I","PRON",4,"nsubj"),
 ("give","give","VERB",0,"root"),("his","his","PRON",6,"nmod:poss"),("case","case","NOUN",4,"iobj"),
 ("some","some","DET",8,"det"),("thought","thought","NOUN",4,"obj"),(".",".","PUNCT",4,"punct")]),
("ex10","DoubleObject","I faxed you the promotional on the Nimitz post office.",[
 ("I","I","PRON",2,"nsubj"),("faxed","fax","VERB",0,"root"),("you","you","PRON",2,"iobj"),
 ("the","the","DET",5,"det"),("promotional","promotional","NOUN",2,"obj"),("on","on","ADP",10,"case"),
 ("the","the","DET",10,"det"),("Nimitz","Nimitz","PROPN",10,"compound"),("post","post","NOUN",10,"compound"),
 ("office","office","NOUN",5,"nmod"),(".",".","PUNCT",2,"punct")]),
]

NOUNS = ["dog", "teacher", "farmer", "pilot", "child", "doctor", "singer", "captain",
         "student", "baker", "nurse", "driver", "writer", "sailor", "painter", "judge"]
OBJECTS = ["letter", "car", "house", "song", "book", "boat", "cake", "map", "bridge",
           "picture", "report", "garden"]
INTRANS = [("slept", "sleep"), ("laughed", "laugh"), ("arrived", "arrive"), ("left", "leave"),
           ("waited", "wait"), ("smiled", "smile"), ("danced", "dance"), ("stumbled", "stumble")]
ADVERBS = ["quietly", "early", "again", "outside", "suddenly", "today", "slowly", "there"]
TRANS = [("painted", "paint"), ("found", "find"), ("sold", "sell"), ("repaired", "repair"),
         ("bought", "buy"), ("described", "describe"), ("carried", "carry"), ("moved", "move")]
SAYS = [("said", "say"), ("thought", "think"), ("noticed", "notice"), ("claimed", "claim"),
        ("believed", "believe"), ("realized", "realize")]
PASSIVE = [("seen", "see"), ("helped", "help"), ("praised", "praise"), ("followed", "follow"),
           ("warned", "warn"), ("chosen", "choose"), ("trained", "train"), ("hired", "hire")]
DITRANS = [("gave", "give"), ("sent", "send"), ("showed", "show"), ("offered", "offer"),
           ("handed", "hand"), ("brought", "bring"), ("promised", "promise"), ("lent", "lend")]
ADJECTIVES = ["tired", "happy", "late", "ready", "angry", "calm"]


def cap(word):
    return word[0].upper() + word[1:]


def intransitive(r):
    n, (v, vl), a = r.choice(NOUNS), r.choice(INTRANS), r.choice(ADVERBS)
    return [("The", "the", "DET", 2, "det"), (n, n, "NOUN", 3, "nsubj"), (v, vl, "VERB", 0, "root"),
            (a, a, "ADV", 3, "advmod"), (".", ".", "PUNCT", 3, "punct")]


def transitive_np(r):
    n, (v, vl), o = r.choice(NOUNS), r.choice(TRANS), r.choice(OBJECTS)
    return [("The", "the", "DET", 2, "det"), (n, n, "NOUN", 3, "nsubj"), (v, vl, "VERB", 0, "root"),
            ("the", "the", "DET", 5, "det"), (o, o, "NOUN", 3, "obj"), (".", ".", "PUNCT", 3, "punct")]


def transitive_c(r):
    n, (v, vl), n2, (v2, v2l) = r.choice(NOUNS), r.choice(SAYS), r.choice(NOUNS), r.choice(INTRANS)
    return [("The", "the", "DET", 2, "det"), (n, n, "NOUN", 3, "nsubj"), (v, vl, "VERB", 0, "root"),
            ("that", "that", "SCONJ", 7, "mark"), ("the", "the", "DET", 6, "det"),
            (n2, n2, "NOUN", 7, "nsubj"), (v2, v2l, "VERB", 3, "ccomp"), (".", ".", "PUNCT", 3, "punct")]


def passive(r):
    n, (v, vl), n2 = r.choice(NOUNS), r.choice(PASSIVE), r.choice(NOUNS)
    return [("The", "the", "DET", 2, "det"), (n, n, "NOUN", 4, "nsubj:pass"),
            ("was", "be", "AUX", 4, "aux:pass"), (v, vl, "VERB", 0, "root"), ("by", "by", "ADP", 7, "case"),
            ("the", "the", "DET", 7, "det"), (n2, n2, "NOUN", 4, "obl:agent"), (".", ".", "PUNCT", 4, "punct")]


def double_object(r):
    n, (v, vl), n2, o = r.choice(NOUNS), r.choice(DITRANS), r.choice(NOUNS), r.choice(OBJECTS)
    return [("The", "the", "DET", 2, "det"), (n, n, "NOUN", 3, "nsubj"), (v, vl, "VERB", 0, "root"),
            ("the", "the", "DET", 5, "det"), (n2, n2, "NOUN", 3, "iobj"), ("a", "a", "DET", 7, "det"),
            (o, o, "NOUN", 3, "obj"), (".", ".", "PUNCT", 3, "punct")]


def copular(r):
    n, a = r.choice(NOUNS), r.choice(ADJECTIVES)
    return [("The", "the", "DET", 2, "det"), (n, n, "NOUN", 4, "nsubj"), ("was", "be", "AUX", 4, "cop"),
            (a, a, "ADJ", 0, "root"), (".", ".", "PUNCT", 4, "punct")]


GENERATORS = [intransitive, transitive_np, transitive_c, passive, double_object]


def text_of(tokens):
    out = ""
    for form, *_ in tokens:
        if out and form not in (".", ","):
            out += " "
        out += form
    return out


def block(sid, tokens, expected=None, text=None, extra=()):
    lines = []
    if expected:
        lines.append(f"# expected = {expected}")
    lines += [f"# sent_id = {sid}", f"# text = {text or text_of(tokens)}"]
    for i, (form, lemma, upos, head, deprel) in enumerate(tokens, 1):
        lines.append("\t".join([str(i), form, lemma, upos, "_", "_", str(head), deprel, "_", "_"]))
    for position, line in extra:
        lines.insert(position, line)
    return "\n".join(lines) + "\n\n"


def generated(r, gen):
    tokens = gen(r)
    tokens[0] = (cap(tokens[0][0]),) + tokens[0][1:]
    return tokens


def unique_sentences(r, gen, count):
    seen, out = set(), []
    while len(out) < count:
        tokens = generated(r, gen)
        key = text_of(tokens).lower()
        if key not in seen:
            seen.add(key)
            out.append(tokens)
    return out


def demo_treebank(r):
    parts = []
    n = 0
    for gen in GENERATORS:
        for tokens in unique_sentences(r, gen, 130):
            n += 1
            parts.append(block(f"demo-{n:04d}", tokens))
    for _ in range(40):
        n += 1
        parts.append(block(f"demo-{n:04d}", generated(r, copular)))
    # A contraction range line and an empty node; both are skipped by readers
    # that only keep the basic tree.
    contraction = [("The", "the", "DET", 2, "det"), ("pilot", "pilot", "NOUN", 5, "nsubj"),
                   ("did", "do", "AUX", 5, "aux"), ("n't", "not", "PART", 5, "advmod"),
                   ("wait", "wait", "VERB", 0, "root"), (".", ".", "PUNCT", 5, "punct")]
    n += 1
    parts.append(block(f"demo-{n:04d}", contraction, text="The pilot didn't wait.",
                       extra=[(4, "3-4\tdidn't\t_\t_\t_\t_\t_\t_\t_\t_")]))
    elided = [("The", "the", "DET", 2, "det"), ("nurse", "nurse", "NOUN", 3, "nsubj"),
              ("left", "leave", "VERB", 0, "root"), (",", ",", "PUNCT", 7, "punct"),
              ("and", "and", "CCONJ", 7, "cc"), ("the", "the", "DET", 7, "det"),
              ("doctor", "doctor", "NOUN", 3, "conj"), ("too", "too", "ADV", 7, "advmod"),
              (".", ".", "PUNCT", 3, "punct")]
    n += 1
    parts.append(block(f"demo-{n:04d}", elided,
                       extra=[(9, "7.1\tleft\tleave\tVERB\t_\t_\t_\t_\t3:conj\tCopyOf=3")]))
    return "".join(parts)


def main():
    root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent
    r = random.Random(20240611)
    (root / "data").mkdir(exist_ok=True)
    (root / "data" / "demo_treebank.conllu").write_text(demo_treebank(r))

    fixtures = root / "tests" / "fixtures"
    fixtures.mkdir(parents=True, exist_ok=True)
    (fixtures / "annotated_examples.conllu").write_text(
        "".join(block(sid, toks, expected=cat, text=text) for sid, cat, text, toks in ANNOTATED_EXAMPLES))

    r = random.Random(50)
    parts = [block(sid, toks, text=text) for sid, _, text, toks in ANNOTATED_EXAMPLES]
    for i in range(40):
        parts.append(block(f"rt-{i + 1:02d}", generated(r, GENERATORS[i % len(GENERATORS)])))
    (fixtures / "roundtrip50.conllu").write_text("".join(parts))


if __name__ == "__main__":
    main()
