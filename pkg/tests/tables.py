"""Published rule rows and input parameters, transcribed for the tests."""

LEVEL = {"small": 0, "medium": 1, "big": 2}
OUT = ["very_small", "small", "medium", "big", "very_big"]
ABBR = {"S": "small", "M": "medium", "B": "big", "VS": "very_small", "VB": "very_big"}

# rule number, resources, knowledge, motivation, score
ATTACKER_ROWS = [
    ("script_kiddie", 1, "small", "small", "small", "very_small"),
    ("hacker", 4, "small", "medium", "small", "small"),
    ("disgruntled_employee", 8, "small", "big", "medium", "medium"),
    ("terrorist", 14, "medium", "medium", "medium", "medium"),
    ("industrial_spy", 26, "big", "big", "medium", "very_big"),
    ("cyber_warrior", 27, "big", "big", "big", "very_big"),
]

# rule number, profile, protection, vulnerabilities, restore cost, success rate
SUCCESS_ROWS = [
    (1, "S", "S", "S", "S", "VS"),
    (2, "S", "S", "S", "M", "S"),
    (6, "S", "S", "M", "B", "M"),
    (10, "S", "M", "S", "S", "VS"),
    (15, "S", "M", "M", "B", "S"),
    (20, "S", "B", "S", "M", "VS"),
    (27, "S", "B", "B", "B", "S"),
    (35, "M", "S", "B", "M", "B"),
    (40, "M", "M", "M", "S", "S"),
    (45, "M", "M", "B", "B", "B"),
    (60, "B", "S", "M", "B", "VB"),
    (70, "B", "M", "B", "S", "B"),
    (81, "B", "B", "B", "B", "VB"),
]

ATTACKER_PARAMS = {
    "resources": [(-0.225, -0.025, 0.1, 0.5), (0.3, 0.6, 0.9), (0.7, 0.9, 1.06, 1.26)],
    "knowledge": [(-0.4, 0, 0.5), (0, 0.5, 1), (0.5, 1, 1.4)],
    "motivation": [(-0.45, -0.05, 0.1, 0.4), (0.2, 0.5, 0.8), (0.6, 0.95, 1.05, 1.45)],
}
SUCCESS_PARAMS = {
    "profile": [(-0.5, 0, 0.5), (0, 0.5, 1), (0.5, 1, 1.5)],
    "protection": [(-0.4, 0, 0.3), (0.1, 0.4, 0.7), (0.4, 1, 1.4)],
    "vulnerabilities": [(-0.4, 0, 0.4), (0.1, 0.5, 0.8), (0.6, 1, 1.4)],
    "restore_cost": [(-0.4, 0, 0.4), (0.1, 0.5, 0.8), (0.7, 1, 1.4)],
}
