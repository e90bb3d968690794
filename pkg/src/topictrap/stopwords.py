"""Frozen stopword lists for the supported corpus languages.

Shipped in-package (rather than fetched from an NLP library) so that
tokenization, and therefore every derived artifact, is reproducible
byte-for-byte across environments. Languages without a list tokenize
with no stopword removal.
"""

from __future__ import annotations

STOPWORDS: dict[str, frozenset[str]] = {
    "en": frozenset("""
        a about above after again against all am an and any are as at be
        because been before being below between both but by can could did do
        does doing down during each few for from further had has have having
        he her here hers herself him himself his how i if in into is it its
        itself just me more most my myself no nor not now of off on once only
        or other our ours ourselves out over own same she should so some such
        than that the their theirs them themselves then there these they this
        those through to too under until up very was we were what when where
        which while who whom why will with you your yours yourself yourselves
        """.split()),
    "fr": frozenset("""
        au aux avec ce ces cet cette dans de des du elle elles en entre est
        et eux il ils je la le les leur leurs lui ma mais me mes moi mon ne
        nos notre nous on ont ou où par pas plus pour qu que qui sa se ses
        son sont sur ta te tes toi ton tu un une vos votre vous y a à été
        être était sera avoir même aussi comme
        """.split()),
    "de": frozenset("""
        aber als am an auch auf aus bei bin bis bist da damit das dass daß
        dein deine dem den der des dessen die dies diese dieser dieses doch
        dort du durch ein eine einem einen einer eines er es für hab habe
        haben hat hatte hier ich ihr ihre im in ist ja kann kein können man
        mein meine mit muss nach nicht noch nun nur oder sehr sich sie sind
        so über um und uns unser unter vom von vor war was weil weiter wenn
        werden wie wieder wir wird zu zum zur
        """.split()),
}


def stopwords_for(lang: str) -> frozenset[str]:
    return STOPWORDS.get(lang, frozenset())
