#!/usr/bin/env python3
"""Regenerates the WordPiece probe fixture.

Builds tests/data/probe_vocab.txt and probe_texts.txt, then runs the
reference uncased WordPiece tokenizer (transformers.BertTokenizer, offline,
constructed directly from the vocab file) and freezes the resulting token id
sequences into probe_expected.json. Run from the repository root:

    python3 tests/oracle/gen_wordpiece_fixture.py
"""

import json
import pathlib

DATA = pathlib.Path(__file__).resolve().parent.parent / "data"

SPECIALS = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]

PUNCT = list("!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~") + [
    "§",  # section sign
    "–",  # en dash
    "—",  # em dash
    "‘", "’", "“", "”",  # curly quotes
    "…",  # ellipsis
]

WORDS = """
the of and to in a is was that for court courts case cases law laws legal
judge judgment opinion state states federal district appeal appellate circuit
plaintiff defendant petitioner respondent party parties counsel attorney
motion order statute statutes evidence record trial jury verdict holding
holdings held hold overrule overruled overruling rule ruled ruling rules
decision decisions decided decide precedent doctrine stare decisis
abrogate abrogated disapprove disapproved recede receded repudiate rescind
affirm affirmed affirming reverse reversed reversing remand remanded vacate
vacated dismiss dismissed grant granted deny denied certiorari jurisdiction
question questions issue issues matter upon under above below prior
extent authority conclude concluded conclusion find finding findings fact
facts we no longer good bad view views express expressly implied therefore
however moreover accordingly because while although since further
v see also cf compare accord u s supreme united
un inter over re dis mis pre post non anti
court's state's sub nom per curiam banc
1 2 3 4 5 6 7 8 9 10 12 56 98 100 531 1965 2000 2021
""".split()

PIECES = """
##s ##ed ##ing ##ly ##er ##est ##ion ##tion ##ation ##al ##ial ##ous
##ive ##able ##ible ##ment ##ness ##ful ##less ##ary ##ory ##ism ##ist
##ate ##ize ##ise ##ity ##ance ##ence ##ant ##ent ##ure ##age ##ship
##rule ##ruled ##ruling ##rul ##lo ##cut ##loc ##ut ##ter ##to ##ther
##aff ##firm ##pal ##ellant ##ellee ##iction ##isdiction ##cision
##cedent ##rogate ##pudiate ##cede ##cind ##turn ##hold ##holding
""".split()


def build_vocab():
    vocab = list(SPECIALS)
    seen = set(vocab)

    def add(tok):
        if tok and tok not in seen:
            vocab.append(tok)
            seen.add(tok)

    for ch in PUNCT:
        add(ch)
    for d in "0123456789":
        add(d)
        add("##" + d)
    for c in "abcdefghijklmnopqrstuvwxyz":
        add(c)
        add("##" + c)
    for w in WORDS:
        add(w)
    for p in PIECES:
        add(p)
    return vocab


TEXTS = [
    "The court, however, held that the statute was constitutional.",
    "We now overrule Dunn v. State, 531 U.S. 98 (2000), to the extent it conflicts.",
    "It is so ordered.",
    "The judgment of the district court is AFFIRMED.",
    "Plaintiff's motion for summary judgment is denied without prejudice.",
    "See also Smith v. Jones, noting that precedent controls this question.",
    "The doctrine of stare decisis does not compel a different result.",
    "§ 1983 provides a cause of action against state officials.",
    "interlocutory appeals are disfavored — absent exceptional circumstances.",
    "The appellant, Mr. Müller, filed a timely notice of appeal.",
    "“We expressly disapprove of the language in our earlier opinion.”",
    "To the extent that prior cases hold otherwise, they are overruled.",
    "The respondent conceded at oral argument that the issue was waived.",
    "An en banc rehearing was granted; the panel opinion is vacated.",
    "Certiorari was granted limited to the second question presented.",
    "The trial court abused its discretion in excluding the evidence.",
    "Accordingly, we reverse and remand for further proceedings.",
    "the café on the corner was not, in fact, a nuisance per se.",
    "Counsel for both parties stipulated to the facts below.",
    "This holding is limited to the narrow circumstances presented here.",
    "A naive reading of naïve précédent-like text mangles résumés.",
    "We recede from our prior decision insofar as it conflicts with today's.",
    "Nothing in this opinion should be read to abrogate common-law immunity.",
    "The statute of limitations barred all claims accruing before 1965.",
    "Was the confession voluntary? The trial judge said yes; we disagree.",
    "snowman ☃ glyphs are not legal vocabulary",
    "IN THE SUPREME COURT OF THE UNITED STATES",
    "No. 12-56: appeal dismissed as moot.",
    "The court below misapplied the harmless-error standard.",
    "Repudiate, rescind, revoke: the contract cases use all three verbs.",
    "Judgment reversed; case remanded with instructions to dismiss.",
    "The question presented is whether the rule announced today applies retroactively.",
    "A 5-4 majority concluded that the earlier test was unworkable.",
    "We hold that the notice requirement is jurisdictional, overruling dicta.",
    "Sub nom. changes confuse citators and humans alike.",
    "   leading and trailing whitespace   should collapse cleanly   ",
    "punctuation:everywhere;really(yes)[brackets]{braces}|pipes~tildes",
    "MIXED case TEXT with ALLCAPS and CamelCase words",
    "the the the the a a a of of to",
    "unaffable witnesses make appellate review harder",
    "per curiam: the petition for rehearing is denied.",
    "The 1965 amendments superseded the earlier statutory scheme.",
    "An émigré's testimony, given via interpreter, was credited.",
    "Good law or not, the precedent has been abrogated by statute.",
    "We disavow the contrary suggestion in footnote 12.",
    "State v. Appellant: conviction affirmed on harmless-error grounds.",
    "The em—dash, the en–dash, and the ellipsis… all punctuate.",
    "Justice X, with whom Justice Y joins, dissenting.",
    "131 S. Ct. 2021 does not control; it addressed a different statute.",
    "This case presents the precise question left open in 2000.",
]


def main():
    from transformers import BertTokenizer

    DATA.mkdir(parents=True, exist_ok=True)
    vocab = build_vocab()
    (DATA / "probe_vocab.txt").write_text("\n".join(vocab) + "\n", encoding="utf-8")
    (DATA / "probe_texts.txt").write_text("\n".join(TEXTS) + "\n", encoding="utf-8")

    tokenizer = BertTokenizer(str(DATA / "probe_vocab.txt"), do_lower_case=True)
    expected = []
    for text in TEXTS:
        tokens = tokenizer.tokenize(text)
        expected.append(tokenizer.convert_tokens_to_ids(tokens))
    (DATA / "probe_expected.json").write_text(
        json.dumps(expected), encoding="utf-8"
    )
    print(f"vocab size {len(vocab)}, {len(TEXTS)} texts frozen")


if __name__ == "__main__":
    main()
