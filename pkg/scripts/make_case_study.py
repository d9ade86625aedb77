"""Write the case-study fixture (one funded video-coding project, grant 2009).

    python scripts/make_case_study.py tests/fixtures/case_study
"""

import argparse

from grantimpact.synthetic import case_study_dataset, write_dataset


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("out_dir")
    ap.add_argument("--seed", type=int, default=2009)
    args = ap.parse_args()
    paths = write_dataset(args.out_dir, *case_study_dataset(args.seed))
    for p in paths.values():
        print(p)


if __name__ == "__main__":
    main()
