"""Regenerates retrieval/chunks30.json and hallucination/screen25.json."""

import json
from pathlib import Path

HERE = Path(__file__).resolve().parent

TOPICS = [
    "carbon allowance auctions set quarterly clearing prices",
    "steel furnaces consume coking coal and emit process gases",
    "solar parks feed daytime electricity into regional grids",
    "freight electrification cuts diesel use on short routes",
    "building insulation lowers winter heating demand sharply",
    "methane capture at landfills burns gas for onsite power",
    "forest restoration stores carbon in soil and biomass",
    "cement clinker substitution reduces process emissions",
    "wind turbines supply evening load along the coast",
    "battery storage shifts renewable output to peak hours",
    "hydrogen electrolysers absorb surplus renewable power",
    "district heating reuses waste heat from data centers",
    "rail freight displaces road haulage for bulk goods",
    "carbon border adjustments price embedded emissions of imports",
    "energy audits find savings in compressed air systems",
    "fleet telematics reduce idling and route mileage",
    "biogas digesters turn manure into grid-quality fuel",
    "smart meters expose households to time-of-use tariffs",
    "retrofit programs upgrade windows in social housing",
    "voluntary offsets fund cookstove projects abroad",
    "emission registries track allowance ownership transfers",
    "verification bodies audit reported facility emissions",
    "shipping lines trial ammonia-fueled engine designs",
    "aviation blends sustainable fuel into long-haul routes",
    "grid operators curtail wind during negative price events",
    "heat pumps replace gas boilers in mild climates",
    "industrial clusters share captured carbon pipelines",
    "peatland rewetting halts long-term soil carbon losses",
    "appliance standards phase out inefficient motors",
    "municipal composting diverts organics from landfill",
]


def build() -> None:
    chunks = [
        {"chunk_id": f"fx{idx:02d}", "body": body}
        for idx, body in enumerate(TOPICS)
    ]
    (HERE / "retrieval" / "chunks30.json").write_text(
        json.dumps(chunks, indent=1, ensure_ascii=False), "utf-8"
    )

    grounded = [
        "The company reduced furnace emissions by recovering process heat.",
        "Purchased electricity reached 48000 MWh during the reporting year.",
        "Renewable electricity reached 35 percent of total purchased power.",
        "Suppliers committed to science-based reduction targets in 2023.",
        "The vehicle fleet switched 60 vans to battery electric drive.",
        "Scope 1 emissions totalled 12400 tonnes of carbon dioxide equivalent.",
        "A third party provided limited assurance over the reported figures.",
        "The recycling rate for operational waste reached 62 percent.",
        "Water treatment consumed 310 MWh across both production sites.",
        "The base year 2019 anchors all reduction accounting.",
        "Reductions reached 18 percent across the first two scopes.",
        "The board reviews climate target progress twice each year.",
        "Net-zero across the value chain is targeted for 2040.",
        "An accelerated 2030 milestone covers the company's own operations.",
        "No purchased offsets count toward the stated reduction targets.",
        "Commuting surveys covered 78 percent of employees.",
        "Logistics providers shifted 40 percent of freight to cleaner fuels.",
        "Risk reviews span short, medium, and long time horizons.",
        "Customer-specific contract data is aggregated before publication.",
        "Historical data back to 2019 is tracked across report versions.",
    ]
    injected = [
        "The company operates a research base on Mars.",
        "Quantum teleportation moves spare parts between warehouses.",
        "A dragon sanctuary offsets residual cafeteria emissions.",
        "Submarine vineyards supply the staff canteen each autumn.",
        "Telepathic audits confirmed supplier honesty levels.",
    ]
    # answer interleaves injected sentences at fixed positions
    order = []
    gi, ii = 0, 0
    for pos in range(25):
        if pos in (3, 8, 13, 18, 23):
            order.append({"text": injected[ii], "injected": True})
            ii += 1
        else:
            order.append({"text": grounded[gi], "injected": False})
            gi += 1
    payload = {"evidence": grounded, "answer_sentences": order}
    (HERE / "hallucination" / "screen25.json").write_text(
        json.dumps(payload, indent=1, ensure_ascii=False), "utf-8"
    )
    print("wrote chunks30.json and screen25.json")


if __name__ == "__main__":
    build()
