package org.example.auth;

import java.util.HashMap;
import java.util.Map;

/**
 * Keeps track of logged-in users.
 */
public class SessionManager {
    private final Map<String, User> sessions = new HashMap<>();

    /**
     * Looks up the user of a session.
     *
     * @param token the session token
     * @return the user's display name
     */
    public String displayName(String token) {
        User user = sessions.get(token);
        return user.getName();
    }

    public void login(String token, User user) {
        sessions.put(token, user); // replaces an older session
    }
}
