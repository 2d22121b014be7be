# app/infrastructure/metadata/resources_description.py

# Shipped preprocessing resources. Each entry names the file under
# app/resources/ and the columns the resource repository reads from it.

RESOURCES_METADATA = [
    {
        "name": "stopwords",
        "description": "Bangla function words and common misspellings, one per line.",
        "filename": "stopwords_bn.txt",
        "format_version": 1,
        "columns": ["word"],
        "has_header": False,
    },
    {
        "name": "stem_rules",
        "description": "Verbal and nominal suffix rules, longest suffix first, plus irregular exception rows.",
        "filename": "stem_rules_bn.tsv",
        "format_version": 1,
        "columns": ["category", "suffix", "replacement", "min_stem_length"],
        "has_header": True,
    },
    {
        "name": "emots",
        "description": "Emoji and ASCII emoticons mapped to a Bangla emotion word with an English gloss.",
        "filename": "emot_dictionary_bn.tsv",
        "format_version": 1,
        "columns": ["key", "bangla_word", "english_gloss"],
        "has_header": True,
    },
]


def resource_entry(name: str) -> dict:
    for entry in RESOURCES_METADATA:
        if entry["name"] == name:
            return entry
    raise KeyError(f"unknown resource {name!r}")
