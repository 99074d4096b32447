"""recipeforge: recipe entity extension, genre classification, annotation."""

from .corpus import (
    GENRE_NAMES,
    CorpusStats,
    DatasetSplit,
    Genre,
    RecipeRecord,
    corpus_stats,
    equalize,
    ingest_csv,
    read_records,
    split_stratified,
    write_csv,
    write_records,
)
from .extraction import (
    DEFAULT_PROCESS_VERBS,
    Entity,
    EntitySet,
    Gazetteer,
    build_gazetteer,
    extend_corpus,
    extract_gazetteer,
    extract_pattern,
    merge_entities,
    normalize_entity,
)
from .features import (
    FeatureSpec,
    Vocabulary,
    build_vocabulary,
    compose_feature_text,
    encode_sequence,
    tokenize,
    vectorize,
)

__version__ = "0.1.0"
