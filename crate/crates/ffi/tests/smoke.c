#include <stdio.h>
#include <string.h>

#include "datatours.h"

#define CHECK(expr)                                                   \
    do {                                                              \
        if (!(expr)) {                                                \
            fprintf(stderr, "line %d: %s\n", __LINE__, #expr);        \
            return 1;                                                 \
        }                                                             \
    } while (0)

int main(int argc, char **argv) {
    CHECK(argc == 2);
    DtGraph *graph = NULL;
    CHECK(dt_graph_from_path(argv[1], false, &graph) == DT_STATUS_OK);
    size_t nodes = 0, links = 0;
    CHECK(dt_graph_counts(graph, &nodes, &links) == DT_STATUS_OK);
    CHECK(nodes == 25 && links == 600);

    char *text = NULL;
    CHECK(dt_tour_render(graph, "network-overview", NULL, 0, DT_FORMAT_MARKDOWN, &text) == DT_STATUS_OK);
    CHECK(strstr(text, "This network has 600 migration routes.") != NULL);
    dt_string_free(text);

    CHECK(dt_tour_render(graph, "ego-network", NULL, 0, DT_FORMAT_JSON, &text) == DT_STATUS_INVALID_SUBJECT);
    CHECK(strcmp(dt_last_error_code(), "SubjectMissing") == 0);

    DtSession *session = NULL;
    CHECK(dt_session_start(graph, "ego-network", "node:kandy", 7, &session) == DT_STATUS_OK);
    dt_graph_free(graph);
    CHECK(dt_session_act(session, "{\"event\": \"next\"}", &text) == DT_STATUS_OK);
    CHECK(strstr(text, "\"position\":1") != NULL);
    dt_string_free(text);
    CHECK(dt_session_act(session, "{\"event\": \"jumpTo\", \"params\": {\"slide\": \"x#1\"}}", NULL) == DT_STATUS_REJECTED);
    CHECK(strcmp(dt_last_error_code(), "UnknownSlide") == 0);
    dt_session_free(session);
    printf("ok %s\n", dt_version());
    return 0;
}
