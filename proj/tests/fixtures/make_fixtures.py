"""Regenerates the small fixture corpus used by CLI and acceptance tests."""
import json

TOPICS = [
    ("graph neural networks for molecules", ["Message passing", "Benchmark datasets", "Node features", "Pooling strategy", "Reported accuracy"]),
    ("retrieval-augmented question answering", ["Retriever type", "Knowledge source", "Reader model", "Evaluation benchmark"]),
    ("speech emotion recognition", ["Acoustic features", "Corpus language", "Classifier", "Number of emotions", "Unweighted accuracy"]),
    ("federated learning privacy", ["Threat model", "Defense mechanism", "Communication cost", "Client count"]),
    ("code generation with language models", ["Model size", "Training corpus", "Programming languages", "Pass@k", "Decoding strategy", "Benchmark"]),
    ("low-resource machine translation", ["Language pairs", "Data augmentation", "Pretrained model", "BLEU score"]),
    ("medical image segmentation", ["Imaging modality", "Network architecture", "Loss function", "Dice score", "Dataset size"]),
    ("robot grasp planning", ["Sensor input", "Gripper type", "Learning paradigm", "Success rate"]),
    ("fairness in recommendation", ["Fairness notion", "Stakeholder", "Mitigation stage", "Datasets", "Utility metric"]),
    ("table question answering", ["Table encoding", "Reasoning type", "Supervision", "Benchmark"]),
]

FORMATS = ["string values", "numbers", "categorical labels", "short phrases"]

lines = []
for t, (topic, aspects) in enumerate(TOPICS):
    m = 5 + (t % 3)
    papers = []
    for i in range(m):
        papers.append({
            "paper_id": f"p{t}-{i}",
            "title": f"A study of {topic}: approach {i + 1}",
            "abstract": f"We investigate {topic} with a method variant {i + 1}. "
                        f"We describe {aspects[i % len(aspects)].lower()} and report results on standard settings.",
            "full_text": f"Introduction. This paper addresses {topic}. Method. Variant {i + 1} changes "
                         f"{aspects[(i + 1) % len(aspects)].lower()}. Experiments. We evaluate carefully.",
        })
    schema = {a: {"definition": f"The {a.lower()} used or reported by each paper on {topic}.",
                  "output_format": FORMATS[(t + k) % len(FORMATS)]} for k, a in enumerate(aspects)}
    header = "| Paper | " + " | ".join(aspects) + " |"
    lines.append({
        "instance_id": f"fx-{t:02d}",
        "papers": papers,
        "caption": f"Comparison of prior work on {topic}.",
        "in_text_refs": [f"Table 1 summarizes prior work on {topic}.", "We group methods by their design choices."],
        "reference_schema": schema,
        "table_values": header,
    })

with open("corpus10.jsonl", "w", newline="\n") as f:
    for rec in lines:
        f.write(json.dumps(rec, ensure_ascii=False, separators=(",", ":")) + "\n")
