import pytest

from recipeforge.corpus import Genre, RecipeRecord
from recipeforge.synthetic import SyntheticCorpusSpec, gen_synthetic

ACCEPTANCE_RESULTS: list[tuple[int, str, bool]] = []


def record_criterion(number: int, description: str, passed: bool) -> None:
    ACCEPTANCE_RESULTS.append((number, description, passed))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number, description, passed in sorted(ACCEPTANCE_RESULTS):
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(
            f"criterion {number:>2}: {description:<58} {verdict}"
        )


@pytest.fixture
def pannu_kakku() -> RecipeRecord:
    """The Finnish oven pancake golden fixture."""
    return RecipeRecord(
        record_id=0,
        title="Pannu Kakku (Finnish Oven Pancake)",
        directions=[
            "Preheat oven to 350 degrees.",
            "Melt butter in oven in a 9x13 pan; should be sizzling when "
            "you take it out.",
            "Meanwhile, mix other ingredients like hell - till very "
            "frothy. Pour batter into pan with melted butter.",
            "Bake 40 minutes. Eat immediately.",
        ],
        ner=["butter", "flour", "sugar", "eggs", "milk", "vanilla"],
        genre=Genre.MEAL,
        provenance="human",
    )


PANNU_KAKKU_EXTENDED = {
    "butter", "9x13", "sugar", "eggs", "Bake 40 minutes", "Melt",
    "vanilla", "350 degrees", "flour", "milk",
}


@pytest.fixture
def muffin_direction() -> str:
    """Direction text whose extraction output is pinned by golden tests."""
    return (
        "Put flour in bowl first. Then sugar then yeast. Next add water "
        "1 egg beaten and oil. Mix together with wooden spoon. Spray "
        "muffin pan with Pam. Fill 1/2 full. bake 450\\u00b0 for 10 to "
        "12 minutes. Pour rest of mixture in Tupperware container and "
        "refrigerate. Stir well each time you use. No rising necessary."
    )


@pytest.fixture
def sample_records() -> list[RecipeRecord]:
    """Small hand-built corpus covering several genres."""
    return [
        RecipeRecord(
            record_id=0,
            title="No Bake Cheesecake",
            directions=[
                "Mix cream cheese and sugar with electric mixer on medium "
                "speed until well blended.",
                "Gently stir in Cool Whip.",
                "Spoon into crust.",
                "Refrigerate 3 hours or overnight.",
            ],
            ner=["cream cheese", "sugar", "graham cracker crust"],
            genre=Genre.BAKERY,
            provenance="human",
        ),
        RecipeRecord(
            record_id=1,
            title="Lime Sherbet",
            directions=[
                "Dissolve Jell-O in boiling water.",
                "Add sugar and lemon juice.",
                "When cool add milk.",
                "Freeze.",
                "If needed beat with mixer until smooth.",
            ],
            ner=["lime Jell-O", "boiling water", "sugar", "lemons", "milk"],
            genre=Genre.DRINKS,
            provenance="human",
        ),
        RecipeRecord(
            record_id=2,
            title="Chicken Pot Pie",
            directions=[
                "Cook chicken until no longer pink and cut up.",
                "Stir all ingredients together and put in pie shell (use "
                "deep dish pie pan).",
                "Cut slits in top crust.",
                "Bake at 375\\u00b0 for 40 minutes.",
            ],
            ner=["cream of chicken soup", "cream of potato soup",
                 "Veg-All vegetables", "milk", "pepper", "chicken breasts"],
            genre=Genre.NONVEG,
            provenance="human",
        ),
        RecipeRecord(
            record_id=3,
            title="Granola Bars",
            directions=[
                "Heat oven to 350\\u00b0.",
                "Mix all ingredients together except chocolate chips until "
                "moistened.",
                "Stir in chocolate chips.",
                "Press mixture evenly in ungreased 9 x 13-inch pan.",
                "Bake until center is set 15 to 17 minutes.",
            ],
            ner=["Bisquick baking mix", "cooking oats", "brown sugar",
                 "margarine", "egg", "semi-sweet chocolate chips", "raisins"],
            genre=Genre.CEREAL,
            provenance="human",
        ),
    ]


@pytest.fixture(scope="session")
def synthetic_corpus() -> list[RecipeRecord]:
    """The bundled desk-scale corpus: 900 records, 100 per genre."""
    return gen_synthetic(SyntheticCorpusSpec(per_genre=100, mixing_rate=0.7,
                                             seed=7))
