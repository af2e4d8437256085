"""Regenerates provider/report_analysis.json from the report fixture.

The scripted summaries quote report sentences so the deterministic
hallucination screen passes, except GHG_12 which injects a fabricated
governance claim adjudicated by the verification prompt.
"""

import json
from pathlib import Path

HERE = Path(__file__).resolve().parent

# distinctive guideline snippet per dimension (matches dimensions.json text)
SNIPPETS = {
    "GHG_1": "organizational and operational boundaries",
    "GHG_2": "classify direct (Scope 1) emission sources",
    "GHG_3": "purchased electricity, heat, steam",
    "GHG_4": "value-chain (Scope 3) categories",
    "GHG_5": "employee commuting and business travel",
    "GHG_6": "accounting methodology and standards",
    "GHG_7": "waste classification, treatment methods",
    "GHG_8": "reporting period and data update frequency",
    "GHG_9": "base year with reliable data",
    "GHG_10": "extent of disclosure was determined",
    "GHG_11": "emission reductions against the base year",
    "GHG_12": "senior-management oversight",
    "GHG_13": "commitment period chosen for each target",
    "GHG_14": "risks and opportunities over short, medium, and long",
}

# summaries reuse the report's own sentences (grounded by construction)
SUMMARIES = {
    "GHG_1": "The greenhouse gas inventory follows the operational control approach and covers wholly-owned subsidiaries, controlled entities, and two joint ventures. Organizational boundaries exclude minority holdings below 20 percent, and each excluded emission source is listed with the reason for exclusion.",
    "GHG_2": "Direct Scope 1 emissions from facilities, the vehicle fleet, and backup generators totalled 12400 tonnes CO2e in 2023. Fuel consumption and mileage records feed standard emission factors, and refrigerant leakage from cooling systems is tracked quarterly.",
    "GHG_3": "Purchased electricity reached 48000 MWh in 2023 and renewable electricity reached 35 percent of the total. Scope 2 emissions are reported market-based using supplier-specific grid emission factors, with heat and cooling consumption disclosed separately.",
    "GHG_4": "Scope 3 value chain emissions cover procurement, upstream logistics, and the use of sold products by customers. Assembly suppliers committed to reduction targets, and logistics providers shifted 40 percent of long-haul freight to lower-carbon fuels.",
    "GHG_5": "An employee commuting survey covered 78 percent of staff and recorded mode split, distance, and frequency. Business travel emissions apply transport mode emission factors per kilometre, and a low-carbon commuting subsidy started in 2023.",
    "GHG_6": "The accounting methodology follows the corporate accounting and reporting standard, and emission factors with data sources are listed in the appendix for verification. An independent third party provided limited assurance over Scope 1 and Scope 2 figures in March 2024.",
    "GHG_7": "Waste is classified by treatment method and the recycling rate reached 62 percent in 2023. Water supply and wastewater treatment consumed 310 MWh, and site-level water reduction targets apply through 2026.",
    "GHG_8": "The report covers January through December 2023 with annual data updates, and historical data back to 2019 is tracked across report versions. Facility and business-unit data pass a consolidation check against double counting and omission.",
    "GHG_9": "The base year 2019 was chosen as the earliest year with reliable data, and base-year emissions are recalculated after significant structural changes such as acquisitions or divestitures. The recalculation policy sets a 5 percent significance threshold.",
    "GHG_10": "Disclosure granularity balances transparency with commercial confidentiality, and the factors behind the published scope and granularity are stated. Customer-specific contract data is aggregated before publication.",
    "GHG_11": "Emission reductions are accounted against the 2019 base year and reached 18 percent across Scope 1 and Scope 2 by the end of 2023. Indirect reduction estimates use supplier-specific emission factors, and voluntary commitments are reported separately from regulatory requirements.",
    # GHG_12 injects a fabricated claim: the internal emission trading trials
    "GHG_12": "The board of directors oversees science-based targets covering Scope 1, Scope 2, and Scope 3 emissions with a 2019 baseline. The company ensures senior management oversight of target setting by conducting internal trials of greenhouse gas emission trading schemes.",
    "GHG_13": "Targets use multi-year commitment periods, and no purchased offsets or credits are counted toward the reduction targets. Safeguards prevent double counting of reductions across the organization, and target recalculation follows the base-year policy.",
    "GHG_14": "Climate-related risks and opportunities are assessed over short, medium, and long time horizons and linked to carbon policy developments. A management process ranks risks by materiality and assigns owners for priority responses.",
}

SCORES = {
    "GHG_1": 70, "GHG_2": 40, "GHG_3": 95, "GHG_4": 85, "GHG_5": 40,
    "GHG_6": 60, "GHG_7": 60, "GHG_8": 70, "GHG_9": 60, "GHG_10": 70,
    "GHG_11": 75, "GHG_12": 80, "GHG_13": 60, "GHG_14": 65,
}

ASSESS_TEXT = {
    dim: f"The report's disclosure partially satisfies this guideline; strengths and gaps are noted in the analysis for {dim}."
    for dim in SNIPPETS
}

GHG12_CORRECTED = (
    "The board of directors oversees science-based targets covering Scope 1, Scope 2, "
    "and Scope 3 emissions with a 2019 baseline."
)

P11_RESPONSE = (
    "[Hallucination Mark]: The response mentions internal trials of greenhouse gas "
    "emission trading schemes, which the report content does not reference. "
    f"[Corrected Response]: {GHG12_CORRECTED} "
    "[Reason Explanation]: The trading scheme trials claim cannot be traced to the "
    "report content, so it is removed."
)


def build() -> list[dict]:
    entries: list[dict] = []
    entries.append(
        {
            "contains": "corporate disclosure analyst",
            "response": json.dumps(
                {
                    "name": "Glacier Networks",
                    "sector": "telecom equipment",
                    "report_year": 2023,
                    "scopes_reported": ["Scope1", "Scope2", "Scope3"],
                }
            ),
        }
    )
    # P11 adjudication for the GHG_12 fabricated claim
    entries.append(
        {
            "contains_all": [
                "document verification assistant",
                "internal trials of greenhouse gas emission trading schemes",
            ],
            "response": P11_RESPONSE,
        }
    )
    for dim, snippet in SNIPPETS.items():
        number = dim.split("_")[1]
        entries.append(
            {
                "contains_all": ["summarizing a corporate carbon emission report", snippet],
                "response": SUMMARIES[dim],
            }
        )
        entries.append(
            {
                "contains_all": ["complies with a greenhouse-gas disclosure guideline", snippet],
                "response": f"{ASSESS_TEXT[dim]}\nScore{number}: {SCORES[dim]}",
            }
        )
    return entries


if __name__ == "__main__":
    out = HERE / "provider" / "report_analysis.json"
    out.write_text(json.dumps(build(), indent=1, ensure_ascii=False), "utf-8")
    print(f"wrote {out} with {len(build())} entries")
