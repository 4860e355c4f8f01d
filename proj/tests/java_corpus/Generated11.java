// File 11
package org.example.gen3;

import java.util.*; // wildcard

/** Generated11 docs. */
public class Generated11 {
    void oscar0Loop(java.util.List<String> xs) {
        for (String x : xs) {
            if (x.isEmpty()) continue; /* skip */
        }
    }

    /** hotel3 one-liner */
    static final String HOTEL3_URL = "http://host/hotel3/*x*/"; // hotel3 trailing

} // end
