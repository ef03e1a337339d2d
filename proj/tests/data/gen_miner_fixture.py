#!/usr/bin/env python3
"""Writes miner_fixture.json: canned GitHub API exchanges for the miner tests.

Three C# repositories. acme/alpha has two pages of closed issues plus open
issues, a pull request, commented issues and one wontfix issue that only the
second pass (recently updated) sees. acme/beta has a comment listing split
over two pages. acme/bare has no labels and is dropped during discovery.
"""
import json
import sys

BASE = "https://api.github.com"
HEADERS = {"x-ratelimit-remaining": "4999", "x-ratelimit-reset": "1704070800"}
PER_PAGE = 100


def ts(day, hour=0):
    return "2023-%02d-%02dT%02d:00:00Z" % (1 + day // 28, 1 + day % 28, hour)


def issue(repo, number, labels, comments=0, state="closed", user="dev%d", pr=False, day=None):
    day = number % 300 if day is None else day
    item = {
        "number": number,
        "html_url": "https://github.com/%s/issues/%d" % (repo, number),
        "repository_url": "%s/repos/%s" % (BASE, repo),
        "title": "Issue %d in %s" % (number, repo),
        "body": "Steps to reproduce issue %d. Please add an option to change it." % number,
        "state": state,
        "labels": [{"name": name} for name in labels],
        "created_at": ts(day),
        "closed_at": ts(day, 5) if state == "closed" else None,
        "user": {"login": user % (number % 4)} if user else None,
        "author_association": ["OWNER", "MEMBER", "CONTRIBUTOR", "NONE"][number % 4],
        "comments": comments,
        "locked": number % 17 == 0,
    }
    if pr:
        item["pull_request"] = {"url": "%s/repos/%s/pulls/%d" % (BASE, repo, number)}
    return item


def comment(login, day, hour, body):
    return {"user": {"login": login} if login else None, "created_at": ts(day, hour), "body": body}


def entry(target, body, link_next=None, status=200):
    headers = dict(HEADERS)
    if link_next:
        headers["link"] = '<%s%s>; rel="next"' % (BASE, link_next)
    return {"target": target, "status": status, "headers": headers, "body": body}


def issues_target(repo, page, pass_no):
    order = "&sort=created&direction=asc" if pass_no == 1 else "&sort=updated&direction=desc"
    return "/repos/%s/issues?state=closed&per_page=%d&page=%d%s" % (repo, PER_PAGE, page, order)


def comments_target(repo, number, page):
    return "/repos/%s/issues/%d/comments?per_page=%d&page=%d" % (repo, number, PER_PAGE, page)


def main(path):
    out = []
    repos = [("acme/alpha", 900), ("acme/beta", 500), ("acme/bare", 300)]
    out.append(entry("/search/repositories?q=language:C%23&sort=stars&order=desc&per_page=100&page=1",
                     {"total_count": 3, "items": [
                         {"full_name": name, "stargazers_count": stars, "language": "C#"}
                         for name, stars in repos]}))
    out.append(entry("/repos/acme/alpha/labels?per_page=1", [{"name": "bug"}]))
    out.append(entry("/repos/acme/beta/labels?per_page=1", [{"name": "wontfix"}]))
    out.append(entry("/repos/acme/bare/labels?per_page=1", []))

    # acme/alpha, pass 1: issues 1..118 closed, 119..120 open, 121 a pull request.
    alpha = []
    for n in range(1, 122):
        labels = ["wontfix"] if n % 5 == 0 else (["bug"] if n % 2 else [])
        if n % 11 == 0:
            labels.append("help wanted")
        state = "open" if n in (119, 120) else "closed"
        user = None if n == 7 else "dev%d"
        alpha.append(issue("acme/alpha", n, labels, comments=2 if n % 9 == 0 else 0, state=state,
                           user=user, pr=n == 121))
    out.append(entry(issues_target("acme/alpha", 1, 1), alpha[:100], link_next=issues_target("acme/alpha", 2, 1)))
    out.append(entry(issues_target("acme/alpha", 2, 1), alpha[100:]))
    for item in alpha:
        if item["comments"] and item["state"] == "closed" and "pull_request" not in item:
            day = item["number"] % 300
            out.append(entry(comments_target("acme/alpha", item["number"], 1), [
                comment("maintainer", day, 3, "Thanks, looking into it."),
                comment(None, day, 1, "Same here."),
            ]))
    # Pass 2: recently updated, already seen wontfix issues plus one new
    # wontfix issue (labelled after pass 1) and one new non-wontfix issue.
    late = issue("acme/alpha", 500, ["Won't Fix"], comments=1, day=40)
    other = issue("acme/alpha", 501, ["question"], day=41)
    out.append(entry(issues_target("acme/alpha", 1, 2), [late, alpha[4], other, alpha[9]]))
    out.append(entry(comments_target("acme/alpha", 500, 1), [comment("owner", 40, 2, "Not planned.")]))

    # acme/beta: four closed issues, issue 2 has comments on two pages.
    beta = [issue("acme/beta", n, ["wontfix"] if n == 2 else ["enhancement"], comments=3 if n == 2 else 0)
            for n in range(1, 5)]
    out.append(entry(issues_target("acme/beta", 1, 1), beta))
    out.append(entry(comments_target("acme/beta", 2, 1), [comment("a", 2, 1, "first"), comment("b", 2, 2, "second")],
                     link_next=comments_target("acme/beta", 2, 2)))
    out.append(entry(comments_target("acme/beta", 2, 2), [comment("a", 2, 3, "third")]))
    out.append(entry(issues_target("acme/beta", 1, 2), [beta[1]]))

    with open(path, "w") as f:
        json.dump(out, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "miner_fixture.json")
