"""Regenerates qa/qa25.jsonl and provider/ablation.json.

Each question carries: the reference answer (sentences from the target
section), rewrite terms that sharpen retrieval vocabulary, and two
grounded-answer entries: a strong one that fires only when the target
section's marker phrase made it into the assembled context, and a weak
fallback: so retrieval quality differences show up in the metric table.
"""

import json
from pathlib import Path

HERE = Path(__file__).resolve().parent

# (question, marker phrase in target section, reference answer, rewrite terms, key sentence)
QUESTIONS = [
    (
        "What do the trading measures aim to achieve?",
        "market mechanisms",
        "These measures regulate carbon emission trading to control greenhouse gas emissions through market mechanisms and support the transition to green and low-carbon development.",
        ["purpose of carbon emission trading measures", "control greenhouse gas emissions market mechanisms"],
        "regulate carbon emission trading through market mechanisms",
    ),
    (
        "Which firms fall under the trading measures?",
        "26000 tonnes",
        "The measures apply to key emission units whose annual emissions reach 26000 tonnes of carbon dioxide equivalent and to the registration, trading, and settlement of allowances.",
        ["key emission units annual threshold", "26000 tonnes carbon dioxide equivalent"],
        "key emission units reach 26000 tonnes of carbon dioxide equivalent",
    ),
    (
        "How are carbon allowances handed out?",
        "historical intensity method",
        "Allowance allocation combines the historical intensity method with the benchmark method, accounting for past emission intensity and industry best practice so that allocation stays fair while rewarding efficient producers.",
        ["allowance allocation method", "historical intensity benchmark method"],
        "allocation combines the historical intensity method with the benchmark method",
    ),
    (
        "Do all industries get allowances the same way?",
        "Differentiated allocation",
        "Differentiated allocation strategies apply to industries according to their characteristics and reduction potential, supporting the optimization of industrial structure.",
        ["differentiated allocation per industry", "industry characteristics reduction potential"],
        "differentiated allocation strategies apply to industries",
    ),
    (
        "Can the total amount of allowances change over time?",
        "adjusted dynamically",
        "The total allowance quantity and allocation rules are adjusted dynamically in light of technological progress and socio-economic development to keep the market effective over the long term.",
        ["total allowance quantity adjustment", "dynamic adjustment technological progress"],
        "total allowance quantity and allocation rules are adjusted dynamically",
    ),
    (
        "How do participants trade allowances?",
        "listed agreement transfer",
        "Trading may proceed by listed agreement transfer or block agreement transfer, and trading prices form through the market on the national carbon emission trading system.",
        ["allowance trading modes", "listed agreement transfer block agreement"],
        "trading proceeds by listed agreement transfer or block agreement transfer",
    ),
    (
        "What must emitters hand over at settlement each year?",
        "surrender allowances",
        "Key emission units shall surrender allowances equal to their verified emissions before the annual settlement deadline, and voluntary emission reduction credits may offset at most 5 percent of the surrender obligation.",
        ["annual settlement surrender obligation", "surrender allowances verified emissions offset"],
        "surrender allowances equal to verified emissions before the settlement deadline",
    ),
    (
        "Who checks that reported emissions are honest?",
        "Ecological environment authorities",
        "Ecological environment authorities supervise reporting and verification, and inspected units shall truthfully report their situation and provide complete emissions information.",
        ["supervision of reporting verification", "ecological environment authorities inspection"],
        "ecological environment authorities supervise reporting and verification",
    ),
    (
        "What happens to firms that fake their numbers?",
        "Falsified emission reports",
        "Falsified emission reports incur penalties between 50000 and 200000 yuan, and the shortfall of surrendered allowances is deducted from the next allocation.",
        ["penalties for falsified emission reports", "falsified reports fines yuan"],
        "falsified emission reports incur penalties",
    ),
    (
        "Can offsets cover the whole surrender obligation?",
        "5 percent",
        "Voluntary emission reduction credits may offset at most 5 percent of the surrender obligation.",
        ["offset limit surrender obligation", "voluntary emission reduction credits 5 percent"],
        "credits may offset at most 5 percent of the surrender obligation",
    ),
    (
        "What does allowance pricing depend on?",
        "trading prices form",
        "Trading prices form through the market on the national carbon emission trading system.",
        ["how allowance prices form", "trading prices national carbon emission trading system"],
        "trading prices form through the market",
    ),
    (
        "Why do the measures reward efficient producers?",
        "industry best practice",
        "Allocation accounts for past emission intensity and industry best practice so that allocation stays fair while rewarding efficient producers.",
        ["fair allocation efficient producers", "emission intensity industry best practice"],
        "allocation stays fair while rewarding efficient producers",
    ),
    (
        "What supports industrial structure optimization in the measures?",
        "optimization of industrial structure",
        "Differentiated allocation strategies apply to industries according to their characteristics and reduction potential, supporting the optimization of industrial structure.",
        ["industrial structure optimization allocation", "differentiated strategies reduction potential"],
        "supporting the optimization of industrial structure",
    ),
    (
        "How does Glacier Networks set its inventory boundaries?",
        "operational control approach",
        "The greenhouse gas inventory follows the operational control approach and covers wholly-owned subsidiaries, controlled entities, and two joint ventures.",
        ["inventory boundary approach", "operational control subsidiaries joint ventures"],
        "the inventory follows the operational control approach",
    ),
    (
        "How big were the company's direct emissions in 2023?",
        "12400 tonnes",
        "Direct Scope 1 emissions from facilities, the vehicle fleet, and backup generators totalled 12400 tonnes CO2e in 2023.",
        ["direct scope 1 emissions total", "facilities fleet generators tonnes CO2e"],
        "direct scope 1 emissions totalled 12400 tonnes CO2e",
    ),
    (
        "How much purchased power was renewable?",
        "35 percent",
        "Purchased electricity reached 48000 MWh in 2023 and renewable electricity reached 35 percent of the total.",
        ["renewable share of purchased electricity", "purchased electricity MWh renewable percent"],
        "renewable electricity reached 35 percent of the total",
    ),
    (
        "What does the value chain accounting cover?",
        "use of sold products",
        "Scope 3 value chain emissions cover procurement, upstream logistics, and the use of sold products by customers.",
        ["scope 3 categories covered", "procurement logistics use of sold products"],
        "scope 3 emissions cover procurement logistics and use of sold products",
    ),
    (
        "How was commuting data gathered?",
        "commuting survey",
        "An employee commuting survey covered 78 percent of staff and recorded mode split, distance, and frequency.",
        ["employee commuting data collection", "commuting survey mode split distance"],
        "an employee commuting survey covered 78 percent of staff",
    ),
    (
        "Who assured the reported figures?",
        "limited assurance",
        "An independent third party provided limited assurance over Scope 1 and Scope 2 figures in March 2024.",
        ["third party assurance of figures", "independent limited assurance scope figures"],
        "an independent third party provided limited assurance",
    ),
    (
        "What share of waste gets recycled?",
        "recycling rate",
        "Waste is classified by treatment method and the recycling rate reached 62 percent in 2023.",
        ["waste recycling share", "recycling rate percent treatment"],
        "the recycling rate reached 62 percent",
    ),
    (
        "Which period does the report cover?",
        "January through December",
        "The report covers January through December 2023 with annual data updates, and historical data back to 2019 is tracked across report versions.",
        ["reporting period coverage", "january december annual data updates"],
        "the report covers january through december 2023",
    ),
    (
        "Why was 2019 picked as the base year?",
        "earliest year with reliable data",
        "The base year 2019 was chosen as the earliest year with reliable data, and base-year emissions are recalculated after significant structural changes such as acquisitions or divestitures.",
        ["base year selection reason", "2019 earliest reliable data recalculated"],
        "2019 was chosen as the earliest year with reliable data",
    ),
    (
        "How much have emissions fallen against the base year?",
        "18 percent",
        "Emission reductions are accounted against the 2019 base year and reached 18 percent across Scope 1 and Scope 2 by the end of 2023.",
        ["reduction achieved against base year", "18 percent scope 1 scope 2 reduction"],
        "reductions reached 18 percent across scope 1 and scope 2",
    ),
    (
        "When does the company plan to hit net zero?",
        "net-zero across the value chain by 2040",
        "The company targets net-zero across the value chain by 2040 with an accelerated 2030 milestone for its own operations.",
        ["net zero target year", "net zero value chain 2040 milestone 2030"],
        "targets net-zero across the value chain by 2040",
    ),
    (
        "Does the company count offsets toward its targets?",
        "no purchased offsets",
        "Targets use multi-year commitment periods, and no purchased offsets or credits are counted toward the reduction targets.",
        ["offsets counted toward targets", "purchased offsets credits reduction targets"],
        "no purchased offsets or credits are counted toward the reduction targets",
    ),
]

WEAK_ANSWER = (
    "The document discusses carbon emission management and related corporate measures."
)


def strong_answer(index: int, reference: str) -> str:
    """Grounded answer quality varies: most quote fully, every third trims."""
    if index % 3 != 2:
        return reference
    words = reference.split()
    return " ".join(words[: max(6, int(len(words) * 0.6))]).rstrip(",;") + "."


def build():
    assert len(QUESTIONS) == 25, len(QUESTIONS)
    dataset_lines = []
    script: list[dict] = []

    for q_index, (question, marker, reference, rewrites, key_sentence) in enumerate(QUESTIONS):
        dataset_lines.append(json.dumps({"question": question, "reference": reference}, ensure_ascii=False))
        script.append(
            {
                "contains_all": ["output requirements step by step", question],
                "response": "1. "
                + "\n".join(rewrites)
                + "\n2. none\n3. "
                + rewrites[0]
                + "\n4. "
                + rewrites[0]
                + "\n5. "
                + rewrites[-1],
            }
        )
        script.append(
            {
                "contains_all": ["senior scholar", question],
                "response": (
                    f"Background: {key_sentence}.\n"
                    f"Key factors: {rewrites[-1]}\n"
                    "Challenges: retrieving the precise clause."
                ),
            }
        )
        script.append(
            {
                "contains_all": ["Extract key sentences", key_sentence],
                "response": key_sentence,
            }
        )
        # strong answer only when the target section text reached the context
        script.append(
            {
                "contains_all": ["The candidate information is as follows", question, marker],
                "response": strong_answer(q_index, reference),
            }
        )
        script.append(
            {
                "contains_all": ["The candidate information is as follows", question],
                "response": WEAK_ANSWER,
            }
        )

    # stage-generic entries (after the specific ones; first match wins)
    script.append(
        {"contains": "carbon emission policies", "response": "Related to policy"}
    )
    script.append({"contains": "Extract key sentences", "response": ""})

    (HERE / "qa" / "qa25.jsonl").write_text("\n".join(dataset_lines) + "\n", "utf-8")
    (HERE / "provider" / "ablation.json").write_text(
        json.dumps(script, indent=1, ensure_ascii=False), "utf-8"
    )

    # server fixture: SQL entries first (specific), then the QA stage script
    sql_entries = [
        {
            "contains_all": ["As a MySQL expert", "How many facilities does each company have?"],
            "response": "SELECT company, count(*) AS n FROM facilities GROUP BY company ORDER BY company ASC",
        },
        {
            "contains_all": ["As a MySQL expert", "wipe the emissions table"],
            "response": "DELETE FROM emissions",
        },
        {
            "contains_all": ["syntax validation", "DELETE FROM emissions"],
            "response": "DELETE FROM emissions",
        },
    ]
    (HERE / "provider" / "server.json").write_text(
        json.dumps(sql_entries + script, indent=1, ensure_ascii=False), "utf-8"
    )
    print(f"wrote {len(dataset_lines)} QA pairs and {len(script)} script entries")


if __name__ == "__main__":
    build()
